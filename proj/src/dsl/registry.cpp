#include "alphaforge/dsl/registry.h"

#include <algorithm>

namespace alphaforge::dsl {

namespace {

using enum ArgKind;

const std::vector<FunctionSpec>& registry() {
    static const std::vector<FunctionSpec> specs = {
        {"DELAY", Kernel::Delay, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"SMA", Kernel::Sma, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"MEAN", Kernel::Sma, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"MA", Kernel::Sma, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"EMA", Kernel::Ema, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"STD", Kernel::Std, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"VAR", Kernel::Var, FunctionClass::TimeSeries, {Series, Window}, {}, 20},
        {"SUM", Kernel::Sum, FunctionClass::TimeSeries, {Series, Window}, {}, 20},
        {"MIN", Kernel::Min, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"MAX", Kernel::Max, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"MEAN_DEV", Kernel::MeanDev, FunctionClass::TimeSeries, {Series, Window}, {}, 0},
        {"ABS", Kernel::Abs, FunctionClass::Pointwise, {Series}, {}, 0},
        {"SIGN", Kernel::Sign, FunctionClass::Pointwise, {Series}, {}, 0},
        {"LOG", Kernel::Log, FunctionClass::Pointwise, {Series}, {}, 0},
        {"SQRT", Kernel::Sqrt, FunctionClass::Pointwise, {Series}, {}, 0},
        {"RSI", Kernel::Rsi, FunctionClass::TimeSeries, {Window}, {"CLOSE"}, 0},
        {"ATR", Kernel::Atr, FunctionClass::TimeSeries, {Window}, {"HIGH", "LOW", "CLOSE"}, 0},
        {"CS_RANK", Kernel::CsRank, FunctionClass::CrossSection, {Series}, {}, 0},
        {"CS_ZSCORE", Kernel::CsZscore, FunctionClass::CrossSection, {Series}, {}, 0},
    };
    return specs;
}

}  // namespace

const FunctionSpec* find_function(std::string_view name) {
    const auto& specs = registry();
    auto it = std::find_if(specs.begin(), specs.end(), [&](const FunctionSpec& s) { return s.name == name; });
    return it == specs.end() ? nullptr : &*it;
}

std::span<const FunctionSpec> all_functions() { return registry(); }

int lookback_contribution(Kernel kernel, int window) {
    switch (kernel) {
        case Kernel::Delay:
        case Kernel::Rsi:
        case Kernel::Atr:
            return window;
        case Kernel::Sma:
        case Kernel::Ema:
        case Kernel::Std:
        case Kernel::Var:
        case Kernel::Sum:
        case Kernel::Min:
        case Kernel::Max:
        case Kernel::MeanDev:
            return window - 1;
        default:
            return 0;
    }
}

}  // namespace alphaforge::dsl
