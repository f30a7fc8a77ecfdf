#pragma once

#include "alphaforge/data/panel.h"
#include "alphaforge/eval/alpha_series.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace fixture {

inline std::vector<alphaforge::Date> weekdays(std::size_t n, alphaforge::Date start = alphaforge::Date::from_ymd(2022, 1, 3)) {
    std::vector<alphaforge::Date> out;
    for (auto d = start; out.size() < n; d = d.plus_days(1)) {
        if (d.is_weekday()) out.push_back(d);
    }
    return out;
}

inline std::string ticker(std::size_t i) {
    std::string s = std::to_string(i);
    return "T" + std::string(3 - std::min<std::size_t>(3, s.size()), '0') + s;
}

/// Geometric random walk of length n starting near 50.
inline std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double vol = 0.02) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(n);
    x[0] = 50.0 * std::exp(0.2 * z(rng));
    for (std::size_t t = 1; t < n; ++t) x[t] = x[t - 1] * std::exp(vol * z(rng));
    return x;
}

/// Close-only panel, one row of closes per ticker.
inline alphaforge::data::PanelPtr close_panel(const std::vector<std::vector<double>>& closes) {
    const std::size_t nd = closes.front().size();
    std::vector<std::string> tickers;
    std::vector<double> flat;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        tickers.push_back(ticker(i));
        flat.insert(flat.end(), closes[i].begin(), closes[i].end());
    }
    alphaforge::data::MarketPanel::FieldMap fields;
    fields.emplace("CLOSE", std::move(flat));
    return std::make_shared<const alphaforge::data::MarketPanel>(weekdays(nd), tickers, std::move(fields));
}

/// Uniform random alpha over a slice's shape; `missing_rate` of cells left missing.
inline alphaforge::eval::AlphaSeries random_alpha(std::mt19937_64& rng, const alphaforge::data::PanelSlice& slice,
                                                  double missing_rate = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(slice.n_tickers() * slice.n_dates());
    for (auto& x : v) x = u(rng) < missing_rate ? std::nan("") : u(rng);
    return {slice.ticker_names(), {slice.dates().begin(), slice.dates().end()}, std::move(v), "random"};
}

}  // namespace fixture
