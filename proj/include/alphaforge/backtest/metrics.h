#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace alphaforge::backtest {

struct MetricConfig {
    double risk_free_rate = 0.0;  // annual
    int trading_days_per_year = 252;
};

/// Return and risk summary of a net-worth path.
///
/// sharpe, sortino and volatility are per-day figures; the annualized variants
/// scale them by sqrt(trading_days_per_year). Undefined ratios are missing with
/// the matching flag cleared.
struct MetricBlock {
    double cumulative_return = 0.0;
    double annual_return = 0.0;
    double volatility = 0.0;
    double annualized_volatility = 0.0;
    double sharpe = 0.0;
    double annualized_sharpe = 0.0;
    double sortino = 0.0;
    double annualized_sortino = 0.0;
    double calmar = 0.0;
    double max_drawdown = 0.0;
    double mean_ic = 0.0;  // filled by callers that know the alpha; missing otherwise
    bool sharpe_defined = false;
    bool sortino_defined = false;
    bool calmar_defined = false;
};

/// Largest peak-to-trough decline as a fraction of the running peak.
double max_drawdown(std::span<const double> net_worth);

/// Needs at least two points, all positive and finite.
MetricBlock compute_metrics(std::span<const double> net_worth, const MetricConfig& cfg = {});

/// CSV with one row per named block: `series,cumulative_return,annual_return,sharpe,
/// volatility,sortino,calmar,max_drawdown,annualized_sharpe,annualized_volatility,mean_ic`.
void write_metrics_csv(const std::vector<std::pair<std::string, MetricBlock>>& rows, std::ostream& out);

}  // namespace alphaforge::backtest
