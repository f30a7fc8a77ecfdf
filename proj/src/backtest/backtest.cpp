#include "alphaforge/backtest/backtest.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace alphaforge::backtest {

void BacktestConfig::validate() const {
    if (k < 1) throw BacktestError("k must be at least 1");
    if (n < 1 || n > k) throw BacktestError("n must lie in [1, k]");
    if (cost_bps < 0.0) throw BacktestError("cost_bps must be non-negative");
}

std::vector<double> BacktestResult::net_worth() const {
    std::vector<double> out;
    for (const auto& d : history) out.push_back(d.net_worth);
    return out;
}

std::vector<double> BacktestResult::benchmark() const {
    std::vector<double> out;
    for (const auto& d : history) out.push_back(d.benchmark);
    return out;
}

BacktestResult run_backtest(const eval::AlphaSeries& alpha, const data::PanelSlice& slice, const BacktestConfig& cfg,
                            std::span<const double> benchmark) {
    cfg.validate();
    const std::size_t nt = slice.n_tickers();
    const std::size_t nd = slice.n_dates();
    if (alpha.tickers() != slice.ticker_names() || alpha.n_dates() != nd ||
        !std::equal(alpha.dates().begin(), alpha.dates().end(), slice.dates().begin())) {
        throw BacktestError("alpha series is not aligned with the panel slice");
    }
    if (cfg.k > nt) {
        throw BacktestError("k = " + std::to_string(cfg.k) + " exceeds the " + std::to_string(nt) +
                            " tickers available; no date can be ranked");
    }
    if (nd < 2) throw BacktestError("backtest needs at least two dates");

    std::vector<double> bench;
    if (benchmark.empty()) {
        bench = data::equal_weight_index(slice);
    } else {
        if (benchmark.size() != nd) throw BacktestError("benchmark length differs from the slice");
        bench.assign(benchmark.begin(), benchmark.end());
    }
    if (!(bench.front() > 0.0)) throw BacktestError("benchmark must start positive");

    const double c = cfg.cost_bps / 1e4;
    std::vector<double> shares(nt, 0.0);
    std::vector<double> last_price(nt, kMissing);
    double cash = 1.0;
    BacktestResult result;

    auto holding_count = [&] {
        return static_cast<std::size_t>(std::count_if(shares.begin(), shares.end(), [](double s) { return s > 0.0; }));
    };

    for (std::size_t d = 0; d < nd; ++d) {
        const Date date = slice.dates()[d];
        auto close = [&](std::size_t i) { return slice.series(data::kClose, i)[d]; };
        for (std::size_t i = 0; i < nt; ++i) {
            if (!is_missing(close(i))) last_price[i] = close(i);
        }

        std::vector<std::size_t> ranked;
        for (std::size_t i = 0; i < nt; ++i) {
            if (!is_missing(alpha.at(i, d)) && !is_missing(close(i))) ranked.push_back(i);
        }
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            double va = alpha.at(a, d), vb = alpha.at(b, d);
            if (va != vb) return va > vb;
            return alpha.tickers()[a] < alpha.tickers()[b];
        });

        DayRecord rec;
        rec.date = date;
        if (ranked.size() < cfg.k) {
            result.skips.push_back({date, std::to_string(ranked.size()) + " rankable tickers, need " +
                                              std::to_string(cfg.k)});
        } else {
            std::vector<std::size_t> rank_of(nt, nt);
            for (std::size_t r = 0; r < ranked.size(); ++r) rank_of[ranked[r]] = r;
            auto in_target = [&](std::size_t i) { return rank_of[i] < cfg.k; };

            std::vector<std::size_t> drops;
            std::vector<std::size_t> adds;
            const std::size_t held = holding_count();
            if (held == 0) {
                adds.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(cfg.k));
            } else {
                for (std::size_t i = 0; i < nt; ++i) {
                    if (shares[i] > 0.0 && !in_target(i) && !is_missing(close(i))) drops.push_back(i);
                }
                std::sort(drops.begin(), drops.end(), [&](std::size_t a, std::size_t b) {
                    if (rank_of[a] != rank_of[b]) return rank_of[a] > rank_of[b];
                    return alpha.tickers()[a] < alpha.tickers()[b];
                });
                if (drops.size() > cfg.n) drops.resize(cfg.n);
                const std::size_t room = cfg.k - (held - drops.size());
                for (std::size_t r = 0; r < cfg.k && adds.size() < std::min(cfg.n, room); ++r) {
                    if (shares[ranked[r]] == 0.0) adds.push_back(ranked[r]);
                }
            }

            for (std::size_t i : drops) {
                const double p = close(i);
                const double notional = shares[i] * p;
                const double fee = notional * c;
                cash += notional - fee;
                result.trades.push_back({date, alpha.tickers()[i], false, shares[i], p, fee});
                shares[i] = 0.0;
            }
            if (!adds.empty() && cash > 0.0) {
                const double budget = cash / static_cast<double>(adds.size());
                for (std::size_t i : adds) {
                    const double p = close(i);
                    const double notional = budget / (1.0 + c);
                    const double fee = notional * c;
                    const double bought = notional / p;
                    shares[i] += bought;
                    cash -= budget;
                    result.trades.push_back({date, alpha.tickers()[i], true, bought, p, fee});
                }
                if (std::abs(cash) < 1e-15) cash = 0.0;
            }
            rec.removals = held == 0 ? 0 : drops.size();
            rec.additions = held == 0 ? 0 : adds.size();
            rec.turnover = static_cast<double>(std::max(rec.removals, rec.additions)) / static_cast<double>(cfg.k);
        }

        double value = cash;
        for (std::size_t i = 0; i < nt; ++i) {
            if (shares[i] > 0.0) {
                value += shares[i] * last_price[i];
                rec.shares[alpha.tickers()[i]] = shares[i];
            }
        }
        rec.cash = cash;
        rec.net_worth = value;
        rec.benchmark = bench[d] / bench.front();
        result.history.push_back(std::move(rec));
    }

    auto nw = result.net_worth();
    result.metrics = compute_metrics(nw, cfg.metrics);
    result.benchmark_metrics = compute_metrics(result.benchmark(), cfg.metrics);
    return result;
}

void write_report_csv(const BacktestResult& r, std::ostream& out) {
    out << "date,net_worth,benchmark_net_worth,turnover,n_holdings\n";
    for (const auto& d : r.history) {
        out << d.date.to_string() << ',' << csv::format_double(d.net_worth) << ',' << csv::format_double(d.benchmark)
            << ',' << csv::format_double(d.turnover) << ',' << d.shares.size() << '\n';
    }
}

void write_plot_csv(const BacktestResult& r, std::ostream& out) {
    out << "date,strategy,benchmark\n";
    for (const auto& d : r.history) {
        out << d.date.to_string() << ',' << csv::format_double(d.net_worth) << ',' << csv::format_double(d.benchmark)
            << '\n';
    }
}

void write_trades_csv(const BacktestResult& r, std::ostream& out) {
    out << "date,ticker,side,shares,price,cost\n";
    for (const auto& t : r.trades) {
        out << t.date.to_string() << ',' << t.ticker << ',' << (t.buy ? "buy" : "sell") << ','
            << csv::format_double(t.shares) << ',' << csv::format_double(t.price) << ','
            << csv::format_double(t.cost) << '\n';
    }
}

}  // namespace alphaforge::backtest
