#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace alphaforge::data {

enum class Regime { Bull, Bear, Sideways };

std::string_view to_string(Regime r);

struct RegimeParams {
    int window = 60;     // trailing trading days
    double tau = 0.05;   // +/- trailing return threshold
};

/// Bull above +tau, Bear below -tau, Sideways otherwise.
Regime label_trailing_return(double trailing_return, double tau);

/// Label for index `t` of a benchmark level series, or nullopt during warmup
/// (t < window) or when either endpoint is missing/non-positive.
std::optional<Regime> regime_at(std::span<const double> levels, std::size_t t, const RegimeParams& params);

}  // namespace alphaforge::data
