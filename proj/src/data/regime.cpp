#include "alphaforge/data/regime.h"

#include "alphaforge/common/missing.h"

namespace alphaforge::data {

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Bull: return "Bull";
        case Regime::Bear: return "Bear";
        case Regime::Sideways: return "Sideways";
    }
    return "?";
}

Regime label_trailing_return(double trailing_return, double tau) {
    if (trailing_return > tau) return Regime::Bull;
    if (trailing_return < -tau) return Regime::Bear;
    return Regime::Sideways;
}

std::optional<Regime> regime_at(std::span<const double> levels, std::size_t t, const RegimeParams& params) {
    const auto w = static_cast<std::size_t>(params.window);
    if (t < w || t >= levels.size()) return std::nullopt;
    double base = levels[t - w];
    double now = levels[t];
    if (is_missing(base) || is_missing(now) || base <= 0.0) return std::nullopt;
    return label_trailing_return(now / base - 1.0, params.tau);
}

}  // namespace alphaforge::data
