#include "alphaforge/agents/scoring.h"

#include "alphaforge/common/missing.h"

#include <algorithm>
#include <cmath>

namespace alphaforge::agents {

std::size_t MarketRegimeSeries::count(Regime r) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), std::optional<Regime>(r)));
}

std::optional<Regime> MarketRegimeSeries::last() const {
    for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
        if (*it) return *it;
    }
    return std::nullopt;
}

MarketRegimeSeries classify_regimes(std::span<const double> benchmark, const RegimeParams& params) {
    if (params.window <= 0) throw std::invalid_argument("regime window must be positive");
    if (!(params.tau > 0.0)) throw std::invalid_argument("regime threshold must be positive");
    if (benchmark.size() <= static_cast<std::size_t>(params.window)) {
        throw std::invalid_argument("benchmark has " + std::to_string(benchmark.size()) +
                                    " points, needs more than the regime window of " + std::to_string(params.window));
    }
    MarketRegimeSeries out;
    out.params = params;
    out.labels.reserve(benchmark.size());
    for (std::size_t t = 0; t < benchmark.size(); ++t) out.labels.push_back(data::regime_at(benchmark, t, params));
    return out;
}

namespace {

void check_aligned(std::span<const double> ic, std::span<const std::optional<Regime>> regimes) {
    if (ic.size() != regimes.size()) throw std::invalid_argument("daily IC and regime labels are not aligned");
}

std::vector<double> in_regime(std::span<const double> ic, std::span<const std::optional<Regime>> regimes, Regime r) {
    std::vector<double> out;
    for (std::size_t t = 0; t < ic.size(); ++t) {
        if (regimes[t] == r && !is_missing(ic[t])) out.push_back(ic[t]);
    }
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double confidence_score(std::span<const double> daily_ic, std::span<const std::optional<Regime>> regimes,
                        Regime current, std::size_t min_obs) {
    check_aligned(daily_ic, regimes);
    auto obs = in_regime(daily_ic, regimes, current);
    if (obs.empty() || obs.size() < min_obs) {
        throw InsufficientObservations("too few " + std::string(data::to_string(current)) + " dates with a defined IC",
                                       obs.size());
    }
    return mean(obs);
}

double confidence_score(const eval::AlphaSeries& alpha, const eval::AlphaSeries& forward,
                        const MarketRegimeSeries& regimes, Regime current, std::size_t min_obs, IcMethod method) {
    auto ic = daily_ic(alpha, forward, method);
    return confidence_score(ic, regimes.labels, current, min_obs);
}

double risk_score(std::span<const double> daily_ic, std::span<const std::optional<Regime>> regimes,
                  std::size_t min_obs) {
    check_aligned(daily_ic, regimes);
    auto bear = in_regime(daily_ic, regimes, Regime::Bear);
    if (bear.empty() || bear.size() < min_obs) {
        throw InsufficientObservations("too few Bear dates with a defined IC", bear.size());
    }
    std::vector<double> all;
    for (double v : daily_ic) {
        if (!is_missing(v)) all.push_back(v);
    }
    double sd = 0.0;
    if (all.size() > 1) {
        double m = mean(all);
        double ss = 0.0;
        for (double v : all) ss += (v - m) * (v - m);
        sd = std::sqrt(ss / static_cast<double>(all.size() - 1));
    }
    return std::clamp(0.5 * (1.0 + mean(bear)) / (1.0 + sd), 0.0, 1.0);
}

double risk_score(const eval::AlphaSeries& alpha, const eval::AlphaSeries& forward, const MarketRegimeSeries& regimes,
                  std::size_t min_obs, IcMethod method) {
    auto ic = daily_ic(alpha, forward, method);
    return risk_score(ic, regimes.labels, min_obs);
}

AgentScore score_alpha(std::string id, std::string category, std::string name, std::span<const double> daily_ic,
                       std::span<const std::optional<Regime>> regimes, Regime current, std::size_t min_obs) {
    AgentScore s;
    s.id = std::move(id);
    s.category = std::move(category);
    s.name = std::move(name);
    s.theta = confidence_score(daily_ic, regimes, current, min_obs);
    s.rho = risk_score(daily_ic, regimes, min_obs);
    for (Regime r : {Regime::Bull, Regime::Bear, Regime::Sideways}) {
        auto obs = in_regime(daily_ic, regimes, r);
        s.n_obs[r] = obs.size();
        if (!obs.empty()) s.ic_by_regime[r] = mean(obs);
    }
    return s;
}

}  // namespace alphaforge::agents
