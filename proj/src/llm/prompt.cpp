#include "alphaforge/llm/prompt.h"

#include <cstdio>

namespace alphaforge::llm {

namespace {

constexpr std::string_view kScoreTemplate = R"(TASK: score_alphas

1. The training set includes:
- Market summary: {{market_summary}}
- Report excerpts:
{{report_excerpts}}
- Factor analysis data. The metric used is the daily cross-sectional IC over the training window:
{{factor_table}}

2. Objective: learn the relationship between the market and report information above and the IC of each factor.

3. For the coming test period:
- Select the factors that will perform best.
- Provide a confidence score and a risk preference, both in [0, 1], for every factor listed.

4. Selection Criteria:
- If no relationship between the reports and IC can be found, favour the factor with the highest IC in each group.
- Prefer factors whose IC holds up in falling markets when assigning the risk preference.

Answer with JSON only, exactly in this shape:
{"scores":[{"name":"<factor name as listed>","confidence":0.0,"risk":0.0}]}
)";

constexpr std::string_view kProposeTemplate = R"(TASK: propose_alphas

You are building a catalog of seed alphas for quantitative equity research.
Categories: {{categories}}

Market summary: {{market_summary}}
Source excerpts:
{{report_excerpts}}

Existing factors and their IC:
{{factor_table}}

Propose new formulaic alphas that are independent of the existing ones. Use only
OPEN, HIGH, LOW, CLOSE, VOLUME, VWAP and the functions DELAY, SMA, EMA, STD, VAR,
SUM, MIN, MAX, MEAN_DEV, ABS, SIGN, LOG, SQRT, RSI, ATR, CS_RANK, CS_ZSCORE, IF.
Window arguments are positive integers.

Answer with JSON only, exactly in this shape:
{"proposals":[{"category":"<one of the categories>","name":"<short name>","expression":"<formula>"}]}
)";

constexpr std::string_view kCategoriesLine =
    "Momentum, Mean Reversion, Volatility, Fundamental, Liquidity, Quality, Growth, Technical, Macro Economics";

std::string factor_table(const std::vector<FactorRow>& rows) {
    if (rows.empty()) return "(none)";
    std::string out;
    for (const auto& r : rows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", r.ic);
        if (!out.empty()) out += '\n';
        out += "- " + r.name + " | IC=" + buf;
    }
    return out;
}

std::string bullet_list(const std::vector<std::string>& items) {
    if (items.empty()) return "(none)";
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += '\n';
        out += "- " + s;
    }
    return out;
}

}  // namespace

std::string_view to_string(Task task) {
    return task == Task::ScoreAlphas ? "score_alphas" : "propose_alphas";
}

std::optional<Task> parse_task(std::string_view text) {
    if (text == "score_alphas") return Task::ScoreAlphas;
    if (text == "propose_alphas") return Task::ProposeAlphas;
    return std::nullopt;
}

std::string fill_template(std::string_view text, const std::map<std::string, std::string, std::less<>>& slots) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = text.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(text.substr(pos));
            return out;
        }
        std::size_t close = text.find("}}", open + 2);
        if (close == std::string_view::npos) throw PromptError("unterminated slot in template");
        out.append(text.substr(pos, open - pos));
        auto name = text.substr(open + 2, close - open - 2);
        auto it = slots.find(name);
        if (it == slots.end()) throw PromptError("unresolved slot '" + std::string(name) + "'");
        out += it->second;
        pos = close + 2;
    }
}

std::vector<std::string> template_ids() { return {"propose_alphas", "score_alphas"}; }

std::string_view template_text(std::string_view template_id) {
    if (template_id == "score_alphas") return kScoreTemplate;
    if (template_id == "propose_alphas") return kProposeTemplate;
    throw PromptError("unknown template '" + std::string(template_id) + "'");
}

std::string render_prompt(const PromptContext& ctx, std::string_view template_id) {
    auto text = template_text(template_id);
    if (to_string(ctx.task) != template_id) {
        throw PromptError("template '" + std::string(template_id) + "' does not serve task " +
                          std::string(to_string(ctx.task)));
    }
    std::map<std::string, std::string, std::less<>> slots{
        {"market_summary", ctx.market_summary.empty() ? "(none)" : ctx.market_summary},
        {"report_excerpts", bullet_list(ctx.report_excerpts)},
        {"factor_table", factor_table(ctx.factor_history)},
        {"categories", std::string(kCategoriesLine)},
    };
    return fill_template(text, slots);
}

std::optional<Task> prompt_task(std::string_view prompt) {
    constexpr std::string_view marker = "TASK: ";
    auto pos = prompt.find(marker);
    if (pos == std::string_view::npos) return std::nullopt;
    auto rest = prompt.substr(pos + marker.size());
    return parse_task(rest.substr(0, rest.find('\n')));
}

}  // namespace alphaforge::llm
