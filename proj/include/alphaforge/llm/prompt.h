#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alphaforge::llm {

enum class Task { ProposeAlphas, ScoreAlphas };

std::string_view to_string(Task task);
std::optional<Task> parse_task(std::string_view text);

struct FactorRow {
    std::string name;  // catalog id
    double ic = 0.0;
};

struct PromptContext {
    Task task = Task::ScoreAlphas;
    std::string market_summary;
    std::vector<std::string> report_excerpts;
    std::vector<FactorRow> factor_history;
};

class PromptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Replaces every `{{slot}}` in `text`; a slot without a value is an error.
std::string fill_template(std::string_view text, const std::map<std::string, std::string, std::less<>>& slots);

/// Shipped template ids: "score_alphas", "propose_alphas".
std::vector<std::string> template_ids();
std::string_view template_text(std::string_view template_id);

/// Renders a shipped template from the context. Factor rows appear one per line as
/// `- <name> | IC=<value>`.
std::string render_prompt(const PromptContext& ctx, std::string_view template_id);

/// The task line a rendered prompt carries, if any.
std::optional<Task> prompt_task(std::string_view prompt);

}  // namespace alphaforge::llm
