#pragma once

#include "alphaforge/eval/alpha_series.h"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace alphaforge::agents {

enum class IcMethod { Pearson, Rank };

std::string_view to_string(IcMethod m);
std::optional<IcMethod> parse_ic_method(std::string_view text);

/// Correlation between predicted and realized values over positions where both are
/// present. Rank IC is Pearson on average ranks of the paired subset. Undefined
/// (nullopt) with fewer than 3 pairs or zero variance on either side.
std::optional<double> information_coefficient(std::span<const double> predicted, std::span<const double> realized,
                                              IcMethod method = IcMethod::Pearson);

/// Cross-sectional IC per date; missing where undefined. Both series must share shape.
std::vector<double> daily_ic(const eval::AlphaSeries& alpha, const eval::AlphaSeries& forward,
                             IcMethod method = IcMethod::Pearson);

/// Mean of the defined entries, or missing when there are none.
double mean_defined(std::span<const double> values);

}  // namespace alphaforge::agents
