#pragma once

#include "alphaforge/agents/ic.h"
#include "alphaforge/data/regime.h"
#include "alphaforge/eval/alpha_series.h"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphaforge::agents {

using data::Regime;
using data::RegimeParams;

/// One label per benchmark date; nullopt during the trailing-window warmup.
struct MarketRegimeSeries {
    std::vector<std::optional<Regime>> labels;
    RegimeParams params;

    std::size_t count(Regime r) const;
    /// Label of the last labelled date, if any.
    std::optional<Regime> last() const;
};

/// Labels each date by the trailing `window`-day benchmark return against +/- tau.
MarketRegimeSeries classify_regimes(std::span<const double> benchmark, const RegimeParams& params = {});

class InsufficientObservations : public std::runtime_error {
public:
    InsufficientObservations(const std::string& what, std::size_t count)
        : std::runtime_error(what + " (" + std::to_string(count) + " observations)"), count_(count) {}
    std::size_t count() const { return count_; }

private:
    std::size_t count_;
};

/// Mean daily IC over dates labelled `current`. Throws InsufficientObservations when
/// fewer than `min_obs` such dates have a defined IC.
double confidence_score(std::span<const double> daily_ic, std::span<const std::optional<Regime>> regimes,
                        Regime current, std::size_t min_obs = 20);
double confidence_score(const eval::AlphaSeries& alpha, const eval::AlphaSeries& forward,
                        const MarketRegimeSeries& regimes, Regime current, std::size_t min_obs = 20,
                        IcMethod method = IcMethod::Pearson);

/// 0.5 * (1 + mean Bear IC) / (1 + sample std of all daily ICs), clamped to [0, 1].
/// Throws InsufficientObservations with fewer than `min_obs` Bear dates.
double risk_score(std::span<const double> daily_ic, std::span<const std::optional<Regime>> regimes,
                  std::size_t min_obs = 20);
double risk_score(const eval::AlphaSeries& alpha, const eval::AlphaSeries& forward, const MarketRegimeSeries& regimes,
                  std::size_t min_obs = 20, IcMethod method = IcMethod::Pearson);

struct AgentScore {
    std::string id;
    std::string category;
    std::string name;
    double theta = 0.0;
    double rho = 0.0;
    double final_score = 0.0;
    std::map<Regime, double> ic_by_regime;
    std::map<Regime, std::size_t> n_obs;
    std::optional<double> llm_confidence;
    std::optional<double> llm_risk;
};

/// Scores one alpha from its daily ICs. `final_score` is left for selection to fill.
AgentScore score_alpha(std::string id, std::string category, std::string name, std::span<const double> daily_ic,
                       std::span<const std::optional<Regime>> regimes, Regime current, std::size_t min_obs = 20);

}  // namespace alphaforge::agents
