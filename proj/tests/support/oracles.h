#pragma once

// Brute-force reference implementations used to check the library. Each one is
// written from the textbook definition with plain loops and shares no code
// with src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

inline const double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double window_mean(const std::vector<double>& x, std::size_t end, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += x[end - static_cast<std::size_t>(k)];
    return s / n;
}

inline double window_std(const std::vector<double>& x, std::size_t end, int n) {
    double m = window_mean(x, end, n);
    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        double d = x[end - static_cast<std::size_t>(k)] - m;
        ss += d * d;
    }
    return std::sqrt(ss / (n - 1));
}

/// CLOSE - DELAY(SMA(CLOSE, 14), 7); defined from index 20.
inline std::vector<double> dpo(const std::vector<double>& close) {
    std::vector<double> out(close.size(), kNaN);
    for (std::size_t t = 20; t < close.size(); ++t) out[t] = close[t] - window_mean(close, t - 7, 14);
    return out;
}

inline std::vector<double> sma(const std::vector<double>& x, int n) {
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < x.size(); ++t) out[t] = window_mean(x, t, n);
    return out;
}

inline std::vector<double> stdev(const std::vector<double>& x, int n) {
    std::vector<double> out(x.size(), kNaN);
    for (std::size_t t = static_cast<std::size_t>(n - 1); t < x.size(); ++t) out[t] = window_std(x, t, n);
    return out;
}

/// EMA seeded by the first value, smoothing 2/(n+1); first n-1 values undefined.
inline std::vector<double> ema(const std::vector<double>& x, int n) {
    std::vector<double> out(x.size(), kNaN);
    const double a = 2.0 / (n + 1.0);
    double e = x[0];
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (t > 0) e = a * x[t] + (1.0 - a) * e;
        if (t + 1 >= static_cast<std::size_t>(n)) out[t] = e;
    }
    return out;
}

/// Wilder RSI: simple average of the first n gains and losses, then
/// avg = (avg * (n - 1) + new) / n. 100 when there are no losses (50 when flat).
inline std::vector<double> rsi(const std::vector<double>& c, int n) {
    std::vector<double> out(c.size(), kNaN);
    double g = 0.0, l = 0.0;
    for (std::size_t t = 1; t < c.size(); ++t) {
        double d = c[t] - c[t - 1];
        double up = d > 0 ? d : 0.0;
        double down = d < 0 ? -d : 0.0;
        if (t <= static_cast<std::size_t>(n)) {
            g += up;
            l += down;
            if (t < static_cast<std::size_t>(n)) continue;
            g /= n;
            l /= n;
        } else {
            g = (g * (n - 1) + up) / n;
            l = (l * (n - 1) + down) / n;
        }
        if (l == 0.0) {
            out[t] = g == 0.0 ? 50.0 : 100.0;
        } else {
            out[t] = 100.0 - 100.0 / (1.0 + g / l);
        }
    }
    return out;
}

/// (UPPER_BAND - LOWER_BAND) / SMA(CLOSE, 20) with bands at +-2 sample std.
inline std::vector<double> bollinger_width(const std::vector<double>& c) {
    std::vector<double> out(c.size(), kNaN);
    for (std::size_t t = 19; t < c.size(); ++t) {
        double m = window_mean(c, t, 20);
        double s = window_std(c, t, 20);
        double up = m + 2 * s;
        double lo = m - 2 * s;
        out[t] = (up - lo) / m;
    }
    return out;
}

inline std::vector<double> forward_returns(const std::vector<double>& c, int h) {
    std::vector<double> out(c.size(), kNaN);
    for (std::size_t t = 0; t + static_cast<std::size_t>(h) < c.size(); ++t) out[t] = c[t + h] / c[t] - 1.0;
    return out;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Average ranks by counting: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> ranks(const std::vector<double>& x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double less = 0, equal = 0;
        for (double v : x) {
            if (v < x[i]) ++less;
            if (v == x[i]) ++equal;
        }
        r[i] = 1.0 + less + (equal - 1.0) / 2.0;
    }
    return r;
}

inline double rank_ic(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks(x), ranks(y));
}

struct Metrics {
    double cumulative, annual, sharpe, volatility, sortino, calmar, max_drawdown;
};

inline Metrics metrics(const std::vector<double>& nw, double rf = 0.0, double days = 252.0) {
    std::vector<double> r;
    for (std::size_t t = 1; t < nw.size(); ++t) r.push_back(nw[t] / nw[t - 1] - 1.0);
    const double n = static_cast<double>(r.size());
    Metrics m{};
    m.cumulative = nw.back() / nw.front() - 1.0;
    m.annual = std::pow(nw.back() / nw.front(), days / n) - 1.0;
    double mean = 0, mean_ex = 0;
    for (double v : r) {
        mean += v / n;
        mean_ex += (v - rf / days) / n;
    }
    double ss = 0;
    for (double v : r) ss += (v - mean) * (v - mean);
    m.volatility = std::sqrt(ss / (n - 1));
    m.sharpe = mean_ex / m.volatility;
    double dd = 0, cnt = 0;
    for (double v : r) {
        if (v < 0) {
            dd += v * v;
            cnt += 1;
        }
    }
    m.sortino = mean_ex / std::sqrt(dd / cnt);
    double worst = 0;
    for (std::size_t j = 0; j < nw.size(); ++j) {
        double peak = nw[0];
        for (std::size_t i = 0; i <= j; ++i) peak = std::max(peak, nw[i]);
        worst = std::max(worst, (peak - nw[j]) / peak);
    }
    m.max_drawdown = worst;
    m.calmar = m.annual / worst;
    return m;
}

struct Candidate {
    std::string category;
    std::string name;
    double theta;
    double rho;
};

/// Per category: keep the `shortlist` best by confidence (name breaks ties),
/// then every member whose blended score exceeds the threshold. The union is
/// ordered by blended score, then category order, then name.
inline std::vector<std::string> select(const std::vector<Candidate>& all, double wc, double wr, double threshold,
                                       std::size_t shortlist, const std::vector<std::string>& category_order) {
    struct Pick {
        double final_score;
        std::size_t cat_rank;
        std::string name;
        std::string id;
    };
    std::vector<Pick> picks;
    for (std::size_t c = 0; c < category_order.size(); ++c) {
        std::vector<Candidate> members;
        for (const auto& a : all) {
            if (a.category == category_order[c]) members.push_back(a);
        }
        for (const auto& a : members) {
            std::size_t better = 0;
            for (const auto& b : members) {
                if (b.theta > a.theta || (b.theta == a.theta && b.name < a.name)) ++better;
            }
            if (better >= shortlist) continue;
            double f = wc * a.theta + wr * a.rho;
            if (f > threshold) picks.push_back({f, c, a.name, a.category + "::" + a.name});
        }
    }
    std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
        if (a.final_score != b.final_score) return a.final_score > b.final_score;
        if (a.cat_rank != b.cat_rank) return a.cat_rank < b.cat_rank;
        return a.name < b.name;
    });
    std::vector<std::string> ids;
    for (const auto& p : picks) ids.push_back(p.id);
    return ids;
}

/// Least squares with an intercept via the normal equations, solved by
/// Gauss-Jordan elimination with partial pivoting. Returns {intercept, w...}.
inline std::vector<double> normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    const std::size_t p = x.front().size() + 1;
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t r = 0; r < x.size(); ++r) {
        std::vector<double> row{1.0};
        row.insert(row.end(), x[r].begin(), x[r].end());
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) a[i][j] += row[i] * row[j];
            a[i][p] += row[i] * y[r];
        }
    }
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t i = 0; i < p; ++i) beta[i] = a[i][p] / a[i][i];
    return beta;
}

}  // namespace oracle
