#include "alphaforge/backtest/metrics.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace alphaforge::backtest {

double max_drawdown(std::span<const double> net_worth) {
    double peak = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double v : net_worth) {
        peak = std::max(peak, v);
        worst = std::max(worst, (peak - v) / peak);
    }
    return worst;
}

MetricBlock compute_metrics(std::span<const double> net_worth, const MetricConfig& cfg) {
    if (net_worth.size() < 2) throw std::invalid_argument("metrics need at least two net-worth points");
    for (double v : net_worth) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("net worth must be positive and finite");
    }
    if (cfg.trading_days_per_year < 1) throw std::invalid_argument("trading_days_per_year must be positive");

    const double days = cfg.trading_days_per_year;
    const double root = std::sqrt(days);
    std::vector<double> r(net_worth.size() - 1);
    for (std::size_t t = 1; t < net_worth.size(); ++t) r[t - 1] = net_worth[t] / net_worth[t - 1] - 1.0;
    const auto n = static_cast<double>(r.size());

    MetricBlock m;
    m.mean_ic = kMissing;
    m.cumulative_return = net_worth.back() / net_worth.front() - 1.0;
    m.annual_return = std::pow(net_worth.back() / net_worth.front(), days / n) - 1.0;

    const double rf_daily = cfg.risk_free_rate / days;
    double mean_excess = 0.0, mean_r = 0.0;
    for (double x : r) {
        mean_excess += x - rf_daily;
        mean_r += x;
    }
    mean_excess /= n;
    mean_r /= n;

    double sd = 0.0;
    if (r.size() > 1) {
        double ss = 0.0;
        for (double x : r) ss += (x - mean_r) * (x - mean_r);
        sd = std::sqrt(ss / (n - 1.0));
    }
    m.volatility = sd;
    m.annualized_volatility = sd * root;
    m.sharpe_defined = sd > 0.0;
    m.sharpe = m.sharpe_defined ? mean_excess / sd : kMissing;
    m.annualized_sharpe = m.sharpe_defined ? m.sharpe * root : kMissing;

    double down_ss = 0.0;
    std::size_t down_n = 0;
    for (double x : r) {
        if (x < 0.0) {
            down_ss += x * x;
            ++down_n;
        }
    }
    const double down_dev = down_n ? std::sqrt(down_ss / static_cast<double>(down_n)) : 0.0;
    m.sortino_defined = down_dev > 0.0;
    m.sortino = m.sortino_defined ? mean_excess / down_dev : kMissing;
    m.annualized_sortino = m.sortino_defined ? m.sortino * root : kMissing;

    m.max_drawdown = max_drawdown(net_worth);
    m.calmar_defined = m.max_drawdown > 0.0;
    m.calmar = m.calmar_defined ? m.annual_return / m.max_drawdown : kMissing;
    return m;
}

void write_metrics_csv(const std::vector<std::pair<std::string, MetricBlock>>& rows, std::ostream& out) {
    out << "series,cumulative_return,annual_return,sharpe,volatility,sortino,calmar,max_drawdown,"
           "annualized_sharpe,annualized_volatility,mean_ic\n";
    for (const auto& [name, m] : rows) {
        out << name;
        for (double v : {m.cumulative_return, m.annual_return, m.sharpe, m.volatility, m.sortino, m.calmar,
                         m.max_drawdown, m.annualized_sharpe, m.annualized_volatility, m.mean_ic}) {
            out << ',' << csv::format_double(v);
        }
        out << '\n';
    }
}

}  // namespace alphaforge::backtest
