#pragma once

#include "alphaforge/backtest/metrics.h"
#include "alphaforge/common/date.h"
#include "alphaforge/data/panel.h"
#include "alphaforge/eval/alpha_series.h"

#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphaforge::backtest {

struct BacktestConfig {
    std::size_t k = 13;
    std::size_t n = 5;
    double cost_bps = 0.0;  // per side, on traded notional
    MetricConfig metrics;

    void validate() const;
};

class BacktestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DayRecord {
    Date date;
    double net_worth = 1.0;
    double cash = 1.0;
    double benchmark = 1.0;
    std::size_t removals = 0;
    std::size_t additions = 0;
    /// max(removals, additions) / k
    double turnover = 0.0;
    std::map<std::string, double> shares;  // holdings after the day's trades
};

struct Trade {
    Date date;
    std::string ticker;
    bool buy = true;
    double shares = 0.0;
    double price = 0.0;
    double cost = 0.0;
};

struct SkipEvent {
    Date date;
    std::string reason;
};

struct BacktestResult {
    std::vector<DayRecord> history;
    std::vector<Trade> trades;
    std::vector<SkipEvent> skips;
    MetricBlock metrics;
    MetricBlock benchmark_metrics;

    std::vector<double> net_worth() const;
    std::vector<double> benchmark() const;
};

/// Daily top-k / drop-n simulation, long only, starting from 1.0 in cash.
///
/// Each date, tickers with a present alpha and close are ranked (alpha desc, ticker
/// asc). The first date with at least k rankable names buys the top k equally.
/// Afterwards at most n incumbents outside the top k are sold (lowest ranked first)
/// and at most n entrants bought (highest ranked first), all at that day's close;
/// the cash on hand is split equally across the buys. Untouched incumbents keep
/// their shares. A date with fewer than k rankable names holds and logs a skip.
///
/// `benchmark` gives one level per date; when empty the equal-weight index of the
/// slice is used.
BacktestResult run_backtest(const eval::AlphaSeries& alpha, const data::PanelSlice& slice,
                            const BacktestConfig& cfg = {}, std::span<const double> benchmark = {});

/// CSV `date,net_worth,benchmark_net_worth,turnover,n_holdings`.
void write_report_csv(const BacktestResult& r, std::ostream& out);
/// CSV `date,strategy,benchmark` for plotting.
void write_plot_csv(const BacktestResult& r, std::ostream& out);
/// CSV `date,ticker,side,shares,price,cost`.
void write_trades_csv(const BacktestResult& r, std::ostream& out);

}  // namespace alphaforge::backtest
