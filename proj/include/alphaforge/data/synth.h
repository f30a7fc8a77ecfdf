#pragma once

#include "alphaforge/data/panel.h"
#include "alphaforge/data/regime.h"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace alphaforge::data {

enum class SignalRegime { Always, Bull, Bear, Sideways, NotBear };

/// A field whose day-t value linearly predicts the t -> t+1 return.
///
/// The field is standard normal per (ticker, day). While the condition holds,
/// the idiosyncratic part of the next return loads on it with `correlation`,
/// so its cross-sectional correlation with forward returns equals
/// `correlation` in expectation.
struct PlantedSignal {
    std::string field = "SIGNAL";
    double correlation = 0.0;
    SignalRegime when = SignalRegime::Always;
};

/// A stretch of days with a fixed mean daily market return.
struct MarketBlock {
    int days = 0;
    double daily_drift = 0.0;
};

struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t n_tickers = 10;
    std::size_t n_days = 250;
    Date start = Date::from_ymd(2021, 1, 4);
    std::vector<PlantedSignal> signals;
    /// Positive step series (quarterly re-marks, held between) for fundamental or macro fields.
    std::vector<std::string> extra_fields;
    double idio_vol = 0.02;
    double market_vol = 0.008;
    /// Explicit market drift schedule; random 40-100 day blocks when empty.
    std::vector<MarketBlock> market_blocks;
    /// Used to decide when regime-conditioned signals are active.
    RegimeParams regime;
};

/// Geometric random-walk OHLCV/VWAP panel on a Mon-Fri calendar.
/// A pure function of its config: the same config yields an identical panel.
PanelPtr synthesize_panel(const SynthConfig& config);

/// 20 tickers over 400 days with an always-on SIGNAL field and a fixed
/// Bull/Bear/Bull/Sideways/Bear drift schedule, so a 60/20/20 split has labelled
/// Bull and Bear stretches in its training slice.
SynthConfig planted_panel_config(std::uint64_t seed = 7, double correlation = 0.6);

/// Same calendar and schedule with BEAR_SIGNAL active only in Bear markets and
/// CALM_SIGNAL active otherwise. Training ends in a Bull stretch, the test slice
/// ends in a Bear one.
SynthConfig regime_flip_panel_config(std::uint64_t seed = 7, double correlation = 0.5);

}  // namespace alphaforge::data
