#include "alphaforge/agents/ic.h"

#include "alphaforge/common/missing.h"
#include "alphaforge/eval/kernels.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alphaforge::agents {

std::string_view to_string(IcMethod m) { return m == IcMethod::Pearson ? "pearson" : "rank"; }

std::optional<IcMethod> parse_ic_method(std::string_view text) {
    if (text == "pearson") return IcMethod::Pearson;
    if (text == "rank") return IcMethod::Rank;
    return std::nullopt;
}

namespace {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    double r = sxy / std::sqrt(sxx * syy);
    if (!std::isfinite(r)) return std::nullopt;
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace

std::optional<double> information_coefficient(std::span<const double> predicted, std::span<const double> realized,
                                              IcMethod method) {
    if (predicted.size() != realized.size()) throw std::invalid_argument("IC inputs differ in length");
    std::vector<double> x, y;
    x.reserve(predicted.size());
    y.reserve(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (is_missing(predicted[i]) || is_missing(realized[i])) continue;
        x.push_back(predicted[i]);
        y.push_back(realized[i]);
    }
    if (x.size() < 3) return std::nullopt;
    if (method == IcMethod::Rank) {
        std::vector<double> rx(x.size()), ry(y.size());
        eval::kernels::average_ranks(x, rx);
        eval::kernels::average_ranks(y, ry);
        return pearson(rx, ry);
    }
    return pearson(x, y);
}

std::vector<double> daily_ic(const eval::AlphaSeries& alpha, const eval::AlphaSeries& forward, IcMethod method) {
    if (!alpha.same_shape(forward)) throw std::invalid_argument("alpha and forward returns are not aligned");
    std::vector<double> out(alpha.n_dates(), kMissing);
    for (std::size_t d = 0; d < alpha.n_dates(); ++d) {
        auto ic = information_coefficient(alpha.column(d), forward.column(d), method);
        if (ic) out[d] = *ic;
    }
    return out;
}

double mean_defined(std::span<const double> values) {
    double s = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        if (is_missing(v)) continue;
        s += v;
        ++n;
    }
    return n ? s / static_cast<double>(n) : kMissing;
}

}  // namespace alphaforge::agents
