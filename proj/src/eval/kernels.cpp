#include "alphaforge/eval/kernels.h"

#include "alphaforge/common/missing.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace alphaforge::eval::kernels {

namespace {

// Calls stat(window) for each position whose trailing n values are all present.
template <class Stat>
void windowed(std::span<const double> x, int n, std::span<double> out, Stat stat) {
    const std::size_t len = x.size();
    const auto w = static_cast<std::size_t>(n);
    std::size_t missing_in_window = 0;
    for (std::size_t t = 0; t < len; ++t) {
        if (is_missing(x[t])) ++missing_in_window;
        if (t >= w && is_missing(x[t - w])) --missing_in_window;
        if (t + 1 < w || missing_in_window > 0) {
            out[t] = kMissing;
        } else {
            out[t] = finite_or_missing(stat(x.subspan(t + 1 - w, w)));
        }
    }
}

double mean_of(std::span<const double> w) {
    double s = 0.0;
    for (double v : w) s += v;
    return s / static_cast<double>(w.size());
}

double sample_var(std::span<const double> w) {
    if (w.size() < 2) return kMissing;
    const double m = mean_of(w);
    double ss = 0.0;
    for (double v : w) ss += (v - m) * (v - m);
    return ss / static_cast<double>(w.size() - 1);
}

}  // namespace

void delay(std::span<const double> x, int n, std::span<double> out) {
    const auto k = static_cast<std::size_t>(n);
    for (std::size_t t = 0; t < x.size(); ++t) out[t] = t >= k ? x[t - k] : kMissing;
}

void rolling_mean(std::span<const double> x, int n, std::span<double> out) { windowed(x, n, out, mean_of); }

void rolling_sum(std::span<const double> x, int n, std::span<double> out) {
    windowed(x, n, out, [](std::span<const double> w) { return std::accumulate(w.begin(), w.end(), 0.0); });
}

void rolling_var(std::span<const double> x, int n, std::span<double> out) { windowed(x, n, out, sample_var); }

void rolling_std(std::span<const double> x, int n, std::span<double> out) {
    windowed(x, n, out, [](std::span<const double> w) { return std::sqrt(sample_var(w)); });
}

void rolling_min(std::span<const double> x, int n, std::span<double> out) {
    windowed(x, n, out, [](std::span<const double> w) { return *std::min_element(w.begin(), w.end()); });
}

void rolling_max(std::span<const double> x, int n, std::span<double> out) {
    windowed(x, n, out, [](std::span<const double> w) { return *std::max_element(w.begin(), w.end()); });
}

void rolling_mean_dev(std::span<const double> x, int n, std::span<double> out) {
    windowed(x, n, out, [](std::span<const double> w) {
        const double m = mean_of(w);
        double s = 0.0;
        for (double v : w) s += std::abs(v - m);
        return s / static_cast<double>(w.size());
    });
}

void ema(std::span<const double> x, int n, std::span<double> out) {
    const double alpha = 2.0 / (n + 1.0);
    double value = 0.0;
    int run = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (is_missing(x[t])) {
            run = 0;
            out[t] = kMissing;
            continue;
        }
        value = run == 0 ? x[t] : alpha * x[t] + (1.0 - alpha) * value;
        ++run;
        out[t] = run >= n ? value : kMissing;
    }
}

namespace {

// Shared Wilder machinery: `step(t)` returns the per-step input (or missing when the
// run breaks); the first n inputs of a run are averaged, then smoothed.
template <class Step, class Emit>
void wilder(std::size_t len, int n, std::span<double> out, Step step, Emit emit) {
    int count = 0;
    double acc_a = 0.0, acc_b = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
        auto s = step(t);  // {valid, a, b}; invalid resets the run
        if (!s.valid) {
            count = 0;
            acc_a = acc_b = 0.0;
            out[t] = kMissing;
            continue;
        }
        if (!s.has_input) {  // run start: no change available yet
            count = 0;
            acc_a = acc_b = 0.0;
            out[t] = kMissing;
            continue;
        }
        ++count;
        if (count <= n) {
            acc_a += s.a;
            acc_b += s.b;
            if (count == n) {
                acc_a /= n;
                acc_b /= n;
                out[t] = emit(acc_a, acc_b);
            } else {
                out[t] = kMissing;
            }
        } else {
            acc_a = (acc_a * (n - 1) + s.a) / n;
            acc_b = (acc_b * (n - 1) + s.b) / n;
            out[t] = emit(acc_a, acc_b);
        }
    }
}

struct WilderStep {
    bool valid;
    bool has_input;
    double a;
    double b;
};

}  // namespace

void rsi(std::span<const double> close, int n, std::span<double> out) {
    wilder(
        close.size(), n, out,
        [&](std::size_t t) {
            if (is_missing(close[t])) return WilderStep{false, false, 0, 0};
            if (t == 0 || is_missing(close[t - 1])) return WilderStep{true, false, 0, 0};
            double d = close[t] - close[t - 1];
            return WilderStep{true, true, d > 0 ? d : 0.0, d < 0 ? -d : 0.0};
        },
        [](double gain, double loss) {
            if (loss == 0.0) return gain == 0.0 ? 50.0 : 100.0;
            return 100.0 - 100.0 / (1.0 + gain / loss);
        });
}

void atr(std::span<const double> high, std::span<const double> low, std::span<const double> close, int n,
         std::span<double> out) {
    auto ok = [&](std::size_t t) { return !is_missing(high[t]) && !is_missing(low[t]) && !is_missing(close[t]); };
    wilder(
        close.size(), n, out,
        [&](std::size_t t) {
            if (!ok(t)) return WilderStep{false, false, 0, 0};
            if (t == 0 || !ok(t - 1)) return WilderStep{true, false, 0, 0};
            double prev = close[t - 1];
            double tr = std::max({high[t] - low[t], std::abs(high[t] - prev), std::abs(low[t] - prev)});
            return WilderStep{true, true, tr, 0.0};
        },
        [](double avg_tr, double) { return avg_tr; });
}

void average_ranks(std::span<const double> x, std::span<double> out) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) out[idx[k]] = r;
        i = j + 1;
    }
}

void cs_rank(std::span<const double> column, std::span<double> out) {
    std::vector<double> present;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < column.size(); ++i) {
        out[i] = kMissing;
        if (!is_missing(column[i])) {
            present.push_back(column[i]);
            where.push_back(i);
        }
    }
    if (present.empty()) return;
    if (present.size() == 1) {
        out[where[0]] = 0.5;
        return;
    }
    std::vector<double> ranks(present.size());
    average_ranks(present, ranks);
    const double denom = static_cast<double>(present.size() - 1);
    for (std::size_t k = 0; k < present.size(); ++k) out[where[k]] = (ranks[k] - 1.0) / denom;
}

void cs_zscore(std::span<const double> column, std::span<double> out) {
    std::vector<double> present;
    for (double v : column) {
        if (!is_missing(v)) present.push_back(v);
    }
    double m = present.empty() ? 0.0 : mean_of(present);
    double sd = std::sqrt(sample_var(present));
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (is_missing(column[i]) || present.size() < 2 || !(sd > 0.0)) {
            out[i] = kMissing;
        } else {
            out[i] = (column[i] - m) / sd;
        }
    }
}

}  // namespace alphaforge::eval::kernels
