#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace alphaforge::dsl {

enum class ArgKind { Series, Window };

enum class Kernel {
    Delay,
    Sma,
    Ema,
    Std,
    Var,
    Sum,
    Min,
    Max,
    MeanDev,
    Abs,
    Sign,
    Log,
    Sqrt,
    Rsi,
    Atr,
    CsRank,
    CsZscore,
};

enum class FunctionClass {
    Pointwise,     // value at t from operands at t
    TimeSeries,    // reads a trailing window
    CrossSection,  // reads all tickers at a fixed date
};

struct FunctionSpec {
    std::string_view name;
    Kernel kernel;
    FunctionClass cls;
    std::vector<ArgKind> args;
    /// Fields read implicitly (RSI reads CLOSE, ATR reads HIGH/LOW/CLOSE).
    std::vector<std::string_view> implicit_fields;
    /// When non-zero the trailing window argument may be omitted and defaults to this.
    int default_window = 0;
};

/// Looks up an upper-case function name; nullptr when unregistered.
const FunctionSpec* find_function(std::string_view name);
std::span<const FunctionSpec> all_functions();

/// Extra trailing days a kernel needs beyond its operand's own lookback.
/// DELAY(n) and RSI/ATR(n) need n; windowed aggregates need n - 1.
int lookback_contribution(Kernel kernel, int window);

}  // namespace alphaforge::dsl
