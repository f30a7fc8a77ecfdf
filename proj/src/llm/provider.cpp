#include "alphaforge/llm/provider.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"
#include "alphaforge/dsl/analysis.h"
#include "alphaforge/dsl/parser.h"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <random>
#include <thread>

namespace alphaforge::llm {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view text, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string_view strip_fences(std::string_view s) {
    s = csv::trim(s);
    if (s.starts_with("```")) {
        auto nl = s.find('\n');
        auto end = s.rfind("```");
        if (nl != std::string_view::npos && end > nl) s = csv::trim(s.substr(nl + 1, end - nl - 1));
    }
    return s;
}

std::string require_string(const json& obj, const char* key, const std::string& raw) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
        throw LlmError(std::string("response item lacks a non-empty string '") + key + "'", raw);
    }
    return it->get<std::string>();
}

double require_unit(const json& obj, const char* key, const std::string& raw, std::vector<std::string>& warnings,
                    const std::string& name) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw LlmError(std::string("score for '") + name + "' lacks a numeric '" + key + "'", raw);
    }
    double v = it->get<double>();
    if (v < 0.0 || v > 1.0) {
        double c = std::clamp(v, 0.0, 1.0);
        warnings.push_back(std::string(key) + " of '" + name + "' clamped from " + csv::format_double(v) + " to " +
                           csv::format_double(c));
        v = c;
    }
    return v;
}

double unit_from(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

struct PoolItem {
    const char* category;
    const char* name;
    const char* expression;
};

constexpr std::array<PoolItem, 8> kValidPool = {{
    {"Momentum", "Range-Scaled Momentum", "(CLOSE - DELAY(CLOSE, 5)) / (MAX(HIGH, 5) - MIN(LOW, 5))"},
    {"Mean Reversion", "VWAP Gap", "(VWAP - CLOSE) / CLOSE"},
    {"Volatility", "Range Volatility Ratio", "STD(HIGH - LOW, 10) / SMA(HIGH - LOW, 30)"},
    {"Liquidity", "Volume Shock", "VOLUME / SMA(VOLUME, 20) - 1"},
    {"Technical", "EMA Crossover", "EMA(CLOSE, 5) / EMA(CLOSE, 20) - 1"},
    {"Momentum", "Ranked Return", "CS_RANK(CLOSE / DELAY(CLOSE, 10))"},
    {"Mean Reversion", "Short Reversal", "-(CLOSE / DELAY(CLOSE, 3) - 1)"},
    {"Technical", "Close Location Value", "((CLOSE - LOW) - (HIGH - CLOSE)) / (HIGH - LOW)"},
}};

constexpr PoolItem kMalformed = {"Volatility", "Fractional Window Volatility", "STD(CLOSE, 2.5)"};

std::string stub_scores(const std::string& prompt, std::uint64_t key) {
    json scores = json::array();
    std::size_t pos = 0;
    while (pos < prompt.size()) {
        std::size_t eol = prompt.find('\n', pos);
        if (eol == std::string::npos) eol = prompt.size();
        std::string_view line(prompt.data() + pos, eol - pos);
        pos = eol + 1;
        if (!line.starts_with("- ")) continue;
        auto bar = line.find(" | IC=");
        if (bar == std::string_view::npos) continue;
        std::string name(line.substr(2, bar - 2));
        double ic = 0.0;
        try {
            ic = csv::parse_double(csv::trim(line.substr(bar + 6)));
        } catch (const std::exception&) {
            continue;
        }
        if (is_missing(ic)) ic = 0.0;
        std::uint64_t h = fnv1a(name, key);
        double conf = std::clamp(0.5 + 4.0 * ic + 0.1 * (unit_from(h) - 0.5), 0.0, 1.0);
        double risk = std::clamp(0.5 + 0.2 * (unit_from(fnv1a("risk", h)) - 0.5), 0.0, 1.0);
        scores.push_back({{"name", name}, {"confidence", conf}, {"risk", risk}});
    }
    return json{{"scores", scores}}.dump();
}

std::string stub_proposals(std::uint64_t key) {
    std::array<std::size_t, kValidPool.size()> order{};
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(key);
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng() % (i + 1)]);
    json items = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = kValidPool[order[k]];
        items.push_back({{"category", p.category}, {"name", p.name}, {"expression", p.expression}});
    }
    items.push_back({{"category", kMalformed.category}, {"name", kMalformed.name}, {"expression", kMalformed.expression}});
    return json{{"proposals", items}}.dump();
}

}  // namespace

LlmResponse parse_response(const std::string& raw, Task expected) {
    json doc;
    try {
        doc = json::parse(strip_fences(raw));
    } catch (const json::parse_error& e) {
        throw LlmError(std::string("malformed JSON: ") + e.what(), raw);
    }
    if (!doc.is_object()) throw LlmError("response is not a JSON object", raw);
    const char* want = expected == Task::ScoreAlphas ? "scores" : "proposals";
    const char* other = expected == Task::ScoreAlphas ? "proposals" : "scores";
    if (!doc.contains(want) || !doc[want].is_array()) {
        throw LlmError(std::string("response lacks a '") + want + "' array", raw);
    }
    if (doc.contains(other)) throw LlmError(std::string("response carries an unexpected '") + other + "'", raw);

    LlmResponse out;
    out.task = expected;
    out.raw = raw;
    for (const auto& item : doc[want]) {
        if (!item.is_object()) throw LlmError("response item is not an object", raw);
        if (expected == Task::ScoreAlphas) {
            ScoreTriple s;
            s.name = require_string(item, "name", raw);
            s.confidence = require_unit(item, "confidence", raw, out.warnings, s.name);
            s.risk = require_unit(item, "risk", raw, out.warnings, s.name);
            out.scores.push_back(std::move(s));
        } else {
            out.proposals.push_back(Proposal{require_string(item, "category", raw), require_string(item, "name", raw),
                                             require_string(item, "expression", raw)});
        }
    }
    return out;
}

std::string StubProvider::chat(const std::string& prompt) {
    auto task = prompt_task(prompt);
    if (!task) throw LlmError("stub provider cannot tell the task of this prompt");
    std::uint64_t key = fnv1a(prompt) ^ (seed_ * 0x9e3779b97f4a7c15ULL);
    return *task == Task::ScoreAlphas ? stub_scores(prompt, key) : stub_proposals(key);
}

LlmResponse complete(Provider& provider, const std::string& prompt, Task task) {
    return parse_response(provider.chat(prompt), task);
}

std::vector<CompletionResult> complete_all(Provider& provider, const std::vector<std::string>& prompts, Task task,
                                           unsigned max_in_flight) {
    std::vector<CompletionResult> out(prompts.size());
    auto run_one = [&](std::size_t k) {
        try {
            out[k].response = complete(provider, prompts[k], task);
        } catch (const std::exception& e) {
            out[k].error = e.what();
        }
    };
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, max_in_flight), prompts.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < prompts.size(); k = next++) run_one(k);
        });
    }
    pool.clear();
    return out;
}

ProposalReview review_proposals(const std::vector<Proposal>& proposals) {
    ProposalReview review;
    for (const auto& p : proposals) {
        auto canon = factory::canonical_category(p.category);
        if (!canon) {
            review.rejected.emplace_back(p, "unknown category '" + p.category + "'");
            continue;
        }
        try {
            auto expr = dsl::parse(p.expression);
            dsl::validate(expr);
        } catch (const std::exception& e) {
            review.rejected.emplace_back(p, e.what());
            continue;
        }
        review.accepted.push_back(
            factory::CatalogEntry{std::string(*canon), p.name, p.expression, factory::Provenance::Llm, 0});
    }
    return review;
}

}  // namespace alphaforge::llm
