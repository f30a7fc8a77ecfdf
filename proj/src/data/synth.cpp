#include "alphaforge/data/synth.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace alphaforge::data {

namespace {

bool active(SignalRegime when, std::optional<Regime> regime) {
    switch (when) {
        case SignalRegime::Always: return true;
        case SignalRegime::Bull: return regime == Regime::Bull;
        case SignalRegime::Bear: return regime == Regime::Bear;
        case SignalRegime::Sideways: return regime == Regime::Sideways;
        case SignalRegime::NotBear: return regime.has_value() && *regime != Regime::Bear;
    }
    return false;
}

std::string upper(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

std::mt19937_64 sub_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

void validate(const SynthConfig& cfg) {
    if (cfg.n_tickers < 1) throw std::invalid_argument("synthesize_panel: n_tickers must be >= 1");
    if (cfg.n_days < 2) throw std::invalid_argument("synthesize_panel: n_days must be >= 2");
    for (const auto& s : cfg.signals) {
        if (!(s.correlation > -1.0 && s.correlation < 1.0)) {
            throw std::invalid_argument("synthesize_panel: correlation for " + s.field + " must lie in (-1, 1)");
        }
        if (s.field.empty()) throw std::invalid_argument("synthesize_panel: planted field needs a name");
    }
    for (std::optional<Regime> r : {std::optional<Regime>{}, std::optional{Regime::Bull},
                                    std::optional{Regime::Bear}, std::optional{Regime::Sideways}}) {
        double load = 0.0;
        for (const auto& s : cfg.signals) {
            if (active(s.when, r)) load += s.correlation * s.correlation;
        }
        if (load >= 1.0) {
            throw std::invalid_argument("synthesize_panel: simultaneously active correlations exceed unit variance");
        }
    }
    for (const auto& b : cfg.market_blocks) {
        if (b.days <= 0) throw std::invalid_argument("synthesize_panel: market block length must be positive");
    }
}

std::vector<double> drift_schedule(const SynthConfig& cfg, std::mt19937_64& rng) {
    std::vector<double> drift;
    drift.reserve(cfg.n_days);
    if (cfg.market_blocks.empty()) {
        const double choices[] = {0.003, -0.003, 0.0};
        std::uniform_int_distribution<int> pick(0, 2);
        std::uniform_int_distribution<int> length(40, 100);
        while (drift.size() < cfg.n_days) {
            double d = choices[pick(rng)];
            int len = length(rng);
            for (int i = 0; i < len && drift.size() < cfg.n_days; ++i) drift.push_back(d);
        }
    } else {
        for (const auto& b : cfg.market_blocks) {
            for (int i = 0; i < b.days && drift.size() < cfg.n_days; ++i) drift.push_back(b.daily_drift);
        }
        while (drift.size() < cfg.n_days) drift.push_back(cfg.market_blocks.back().daily_drift);
    }
    return drift;
}

}  // namespace

PanelPtr synthesize_panel(const SynthConfig& cfg) {
    validate(cfg);
    const std::size_t nt = cfg.n_tickers;
    const std::size_t nd = cfg.n_days;

    std::vector<Date> dates;
    dates.reserve(nd);
    for (Date d = cfg.start; dates.size() < nd; d = d.plus_days(1)) {
        if (d.is_weekday()) dates.push_back(d);
    }
    std::vector<std::string> tickers;
    const int width = std::max(3, static_cast<int>(std::to_string(nt - 1).size()));
    for (std::size_t i = 0; i < nt; ++i) {
        std::string digits = std::to_string(i);
        tickers.push_back("T" + std::string(static_cast<std::size_t>(width) - std::min(digits.size(), static_cast<std::size_t>(width)), '0') + digits);
    }

    std::mt19937_64 rng = sub_engine(cfg.seed, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const std::vector<double> drift = drift_schedule(cfg, rng);
    std::vector<double> beta(nt), start_price(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        beta[i] = 0.8 + 0.4 * uniform(rng);
        start_price[i] = 10.0 + 90.0 * uniform(rng);
    }

    // Signal values are drawn from their own streams so adding a signal leaves the others intact.
    std::vector<std::vector<double>> signal_values(cfg.signals.size(), std::vector<double>(nt * nd));
    for (std::size_t s = 0; s < cfg.signals.size(); ++s) {
        auto eng = sub_engine(cfg.seed, 1000 + s);
        for (std::size_t t = 0; t < nd; ++t) {
            for (std::size_t i = 0; i < nt; ++i) signal_values[s][i * nd + t] = normal(eng);
        }
    }

    std::vector<double> open(nt * nd), high(nt * nd), low(nt * nd), close(nt * nd), vwap(nt * nd),
        volume(nt * nd);
    std::vector<double> levels(nd, 1.0);
    std::vector<double> prev_close(nt), cur_close(nt);
    EqualWeightIndex index;
    const double sigma = cfg.idio_vol;

    for (std::size_t t = 0; t < nd; ++t) {
        if (t == 0) {
            for (std::size_t i = 0; i < nt; ++i) cur_close[i] = start_price[i];
        } else {
            std::optional<Regime> regime = regime_at(levels, t - 1, cfg.regime);
            const double market = drift[t] + cfg.market_vol * normal(rng);
            for (std::size_t i = 0; i < nt; ++i) {
                double loaded = 0.0;
                double load_var = 0.0;
                for (std::size_t s = 0; s < cfg.signals.size(); ++s) {
                    if (!active(cfg.signals[s].when, regime)) continue;
                    double c = cfg.signals[s].correlation;
                    loaded += c * signal_values[s][i * nd + t - 1];
                    load_var += c * c;
                }
                double idio = loaded + std::sqrt(1.0 - load_var) * normal(rng);
                double r = std::max(beta[i] * market + sigma * idio, -0.95);
                cur_close[i] = prev_close[i] * (1.0 + r);
            }
        }
        for (std::size_t i = 0; i < nt; ++i) {
            const std::size_t c = i * nd + t;
            double ref = t == 0 ? cur_close[i] : prev_close[i];
            double o = ref * (1.0 + 0.3 * sigma * normal(rng));
            double cl = cur_close[i];
            double h = std::max(o, cl) * (1.0 + 0.5 * sigma * std::abs(normal(rng)));
            double l = std::min(o, cl) * (1.0 - 0.5 * sigma * std::abs(normal(rng)));
            open[c] = o;
            close[c] = cl;
            high[c] = h;
            low[c] = l;
            vwap[c] = (h + l + cl) / 3.0;
            volume[c] = std::exp(13.8 + 0.5 * normal(rng));
        }
        if (t > 0) levels[t] = index.step(prev_close, cur_close);
        prev_close = cur_close;
    }

    MarketPanel::FieldMap fields;
    fields.emplace(std::string(kOpen), std::move(open));
    fields.emplace(std::string(kHigh), std::move(high));
    fields.emplace(std::string(kLow), std::move(low));
    fields.emplace(std::string(kClose), std::move(close));
    fields.emplace(std::string(kVwap), std::move(vwap));
    fields.emplace(std::string(kVolume), std::move(volume));
    for (std::size_t s = 0; s < cfg.signals.size(); ++s) {
        if (!fields.emplace(upper(cfg.signals[s].field), std::move(signal_values[s])).second) {
            throw std::invalid_argument("synthesize_panel: duplicate field " + cfg.signals[s].field);
        }
    }
    for (std::size_t k = 0; k < cfg.extra_fields.size(); ++k) {
        auto eng = sub_engine(cfg.seed, 5000 + k);
        std::vector<double> values(nt * nd);
        for (std::size_t i = 0; i < nt; ++i) {
            double v = 1.0 + 99.0 * uniform(eng);
            for (std::size_t t = 0; t < nd; ++t) {
                if (t > 0 && t % 63 == 0) v *= std::exp(0.1 * normal(eng));
                values[i * nd + t] = v;
            }
        }
        if (!fields.emplace(upper(cfg.extra_fields[k]), std::move(values)).second) {
            throw std::invalid_argument("synthesize_panel: duplicate field " + cfg.extra_fields[k]);
        }
    }
    return std::make_shared<const MarketPanel>(std::move(dates), std::move(tickers), std::move(fields));
}

namespace {

std::vector<MarketBlock> demo_schedule() {
    return {{80, 0.002}, {80, -0.003}, {80, 0.002}, {80, 0.0}, {80, -0.003}};
}

}  // namespace

SynthConfig planted_panel_config(std::uint64_t seed, double correlation) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_tickers = 20;
    cfg.n_days = 400;
    cfg.signals = {{"SIGNAL", correlation, SignalRegime::Always}};
    cfg.market_blocks = demo_schedule();
    return cfg;
}

SynthConfig regime_flip_panel_config(std::uint64_t seed, double correlation) {
    SynthConfig cfg = planted_panel_config(seed, correlation);
    cfg.signals = {{"BEAR_SIGNAL", correlation, SignalRegime::Bear},
                   {"CALM_SIGNAL", correlation, SignalRegime::NotBear}};
    return cfg;
}

}  // namespace alphaforge::data
