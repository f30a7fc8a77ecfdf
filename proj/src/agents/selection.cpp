#include "alphaforge/agents/selection.h"

#include "alphaforge/common/csv.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace alphaforge::agents {

void SelectionConfig::validate() const {
    if (w_c < 0.0 || w_r < 0.0) throw std::invalid_argument("agent weights must be non-negative");
    if (std::abs(w_c + w_r - 1.0) > 1e-9) throw std::invalid_argument("agent weights must sum to 1");
    if (llm_blend < 0.0 || llm_blend > 1.0) throw std::invalid_argument("llm_blend must lie in [0, 1]");
    if (per_category_shortlist == 0) throw std::invalid_argument("per-category shortlist must be at least 1");
}

double final_score(const AgentScore& s, const SelectionConfig& cfg) {
    double base = cfg.w_c * s.theta + cfg.w_r * s.rho;
    if (cfg.llm_blend > 0.0 && s.llm_confidence && s.llm_risk) {
        double llm = cfg.w_c * *s.llm_confidence + cfg.w_r * *s.llm_risk;
        return (1.0 - cfg.llm_blend) * base + cfg.llm_blend * llm;
    }
    return base;
}

bool SelectionResult::is_selected(const std::string& id) const {
    return std::any_of(selected.begin(), selected.end(), [&](const AgentScore& s) { return s.id == id; });
}

SelectionResult select_alphas(const factory::AlphaCatalog& catalog, const std::map<std::string, AgentScore>& scores,
                              const SelectionConfig& cfg) {
    cfg.validate();
    if (catalog.size() == 0) throw std::invalid_argument("empty catalog");

    SelectionResult result;
    for (const auto& category : catalog.categories()) {
        std::vector<AgentScore> members;
        for (auto i : catalog.indices_of(category)) {
            const auto id = catalog.entry(i).id();
            auto it = scores.find(id);
            if (it == scores.end()) {
                result.skipped.push_back(id);
                continue;
            }
            AgentScore s = it->second;
            s.category = catalog.entry(i).category;
            s.name = catalog.entry(i).name;
            s.id = id;
            s.final_score = final_score(s, cfg);
            result.scored.push_back(s);
            members.push_back(std::move(s));
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [](const AgentScore& a, const AgentScore& b) {
            if (a.theta != b.theta) return a.theta > b.theta;
            return a.name < b.name;
        });
        if (members.size() > cfg.per_category_shortlist) members.resize(cfg.per_category_shortlist);

        const AgentScore* best = nullptr;
        for (const auto& m : members) {
            if (!best || m.final_score > best->final_score ||
                (m.final_score == best->final_score && m.name < best->name)) {
                best = &m;
            }
            if (m.final_score > cfg.threshold) result.selected.push_back(m);
        }
        result.category_best[category] = best->id;
    }

    std::sort(result.selected.begin(), result.selected.end(), [](const AgentScore& a, const AgentScore& b) {
        if (a.final_score != b.final_score) return a.final_score > b.final_score;
        auto ra = factory::category_rank(a.category), rb = factory::category_rank(b.category);
        if (ra != rb) return ra < rb;
        return a.name < b.name;
    });
    result.status = result.selected.empty() ? SelectionStatus::NothingPassed : SelectionStatus::Selected;
    return result;
}

void write_scores_csv(const SelectionResult& result, std::ostream& out) {
    out << "alpha,category,theta,rho,final,selected\n";
    for (const auto& s : result.scored) {
        out << s.id << ',' << s.category << ',' << csv::format_double(s.theta) << ',' << csv::format_double(s.rho)
            << ',' << csv::format_double(s.final_score) << ',' << (result.is_selected(s.id) ? 1 : 0) << '\n';
    }
}

}  // namespace alphaforge::agents
