#pragma once

#include "alphaforge/factory/catalog.h"
#include "alphaforge/llm/prompt.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphaforge::llm {

struct Proposal {
    std::string category;
    std::string name;
    std::string expression;

    friend bool operator==(const Proposal&, const Proposal&) = default;
};

struct ScoreTriple {
    std::string name;
    double confidence = 0.0;
    double risk = 0.0;
};

/// A parsed reply. Exactly one of `proposals` / `scores` is meaningful, per `task`.
struct LlmResponse {
    Task task = Task::ScoreAlphas;
    std::vector<Proposal> proposals;
    std::vector<ScoreTriple> scores;
    std::string raw;
    std::vector<std::string> warnings;
};

/// Schema or transport failure. `raw()` holds the reply text when one was received.
class LlmError : public std::runtime_error {
public:
    LlmError(const std::string& what, std::string raw = {}) : std::runtime_error(what), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

/// Parses the strict JSON envelope. Scores outside [0, 1] are clamped and noted in
/// `warnings`; anything else that does not match the schema for `expected` throws.
LlmResponse parse_response(const std::string& raw, Task expected);

class Provider {
public:
    virtual ~Provider() = default;
    /// Returns the reply text for one prompt. Must be safe to call concurrently.
    virtual std::string chat(const std::string& prompt) = 0;
    virtual std::string name() const = 0;
};

/// Offline provider. Replies are a pure function of (prompt, seed).
///
/// For score prompts it reads the `- <name> | IC=<value>` rows and answers with
/// one triple per row, confidence rising with IC. For proposal prompts it picks
/// five formulas from a fixed pool that includes one malformed expression.
class StubProvider : public Provider {
public:
    explicit StubProvider(std::uint64_t seed = 1) : seed_(seed) {}
    std::string chat(const std::string& prompt) override;
    std::string name() const override { return "stub"; }

private:
    std::uint64_t seed_;
};

/// Sends the prompt, parses the reply for `task`, and returns it.
LlmResponse complete(Provider& provider, const std::string& prompt, Task task);

struct CompletionResult {
    std::optional<LlmResponse> response;
    std::string error;
    bool ok() const { return response.has_value(); }
};

/// Runs one request per prompt with at most `max_in_flight` concurrent requests.
/// Results are returned in prompt order.
std::vector<CompletionResult> complete_all(Provider& provider, const std::vector<std::string>& prompts, Task task,
                                           unsigned max_in_flight = 4);

struct ProposalReview {
    std::vector<factory::CatalogEntry> accepted;  // provenance llm
    std::vector<std::pair<Proposal, std::string>> rejected;
};

/// Keeps proposals whose category is known and whose expression parses and validates.
ProposalReview review_proposals(const std::vector<Proposal>& proposals);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace alphaforge::llm
