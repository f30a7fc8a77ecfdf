#pragma once

#include <span>

// Whole-series kernels. Every function writes one output per input position;
// positions whose window is not yet full, or contains a missing value, are missing.
namespace alphaforge::eval::kernels {

void delay(std::span<const double> x, int n, std::span<double> out);

void rolling_mean(std::span<const double> x, int n, std::span<double> out);
void rolling_sum(std::span<const double> x, int n, std::span<double> out);
/// Sample variance / standard deviation (n - 1 denominator).
void rolling_var(std::span<const double> x, int n, std::span<double> out);
void rolling_std(std::span<const double> x, int n, std::span<double> out);
void rolling_min(std::span<const double> x, int n, std::span<double> out);
void rolling_max(std::span<const double> x, int n, std::span<double> out);
/// Mean absolute deviation from the window mean.
void rolling_mean_dev(std::span<const double> x, int n, std::span<double> out);

/// EMA with smoothing 2/(n+1), seeded by the first value of each uninterrupted run.
/// The first n-1 outputs of a run are masked.
void ema(std::span<const double> x, int n, std::span<double> out);

/// Wilder RSI on closes. First value at run start + n (simple mean of n changes),
/// then Wilder smoothing. Flat windows give 50, all-gain 100, all-loss 0.
void rsi(std::span<const double> close, int n, std::span<double> out);

/// Wilder ATR over true range; same seeding as rsi.
void atr(std::span<const double> high, std::span<const double> low, std::span<const double> close, int n,
         std::span<double> out);

/// Average ranks of non-missing entries scaled to [0, 1]; a lone value ranks 0.5.
void cs_rank(std::span<const double> column, std::span<double> out);
/// (x - mean) / sample std over non-missing entries.
void cs_zscore(std::span<const double> column, std::span<double> out);

/// Fractional average ranks (1-based) of `x`; ties share the mean of their positions.
void average_ranks(std::span<const double> x, std::span<double> out);

}  // namespace alphaforge::eval::kernels
