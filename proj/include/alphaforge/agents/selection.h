#pragma once

#include "alphaforge/agents/scoring.h"
#include "alphaforge/factory/catalog.h"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace alphaforge::agents {

struct SelectionConfig {
    double w_c = 0.6;
    double w_r = 0.4;
    /// An alpha is kept when its final score is strictly above this.
    double threshold = 0.25;
    std::size_t per_category_shortlist = 5;
    /// Share of the final score taken from LLM-suggested confidence/risk.
    double llm_blend = 0.0;

    /// Throws std::invalid_argument on negative weights, w_c + w_r != 1,
    /// llm_blend outside [0, 1] or an empty shortlist.
    void validate() const;
};

/// w_c * theta + w_r * rho, blended with the LLM triple when present and llm_blend > 0.
double final_score(const AgentScore& s, const SelectionConfig& cfg);

enum class SelectionStatus { Selected, NothingPassed };

struct SelectionResult {
    SelectionStatus status = SelectionStatus::NothingPassed;
    /// Above-threshold alphas ordered by (final desc, category order, name asc).
    std::vector<AgentScore> selected;
    /// Every scored alpha with its final score filled in, in catalog order.
    std::vector<AgentScore> scored;
    /// Highest-final shortlisted alpha id per category, whether or not it passed.
    std::map<std::string, std::string> category_best;
    /// Catalog ids with no score.
    std::vector<std::string> skipped;

    bool is_selected(const std::string& id) const;
};

/// Category-based selection: per category, shortlist the top entries by theta
/// (ties by name), compute final scores, keep those above the threshold.
SelectionResult select_alphas(const factory::AlphaCatalog& catalog, const std::map<std::string, AgentScore>& scores,
                              const SelectionConfig& cfg = {});

/// CSV `alpha,category,theta,rho,final,selected`, one row per scored alpha.
void write_scores_csv(const SelectionResult& result, std::ostream& out);

}  // namespace alphaforge::agents
