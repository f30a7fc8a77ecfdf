#pragma once

#include "alphaforge/data/panel.h"
#include "alphaforge/dsl/ast.h"
#include "alphaforge/eval/alpha_series.h"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphaforge::eval {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluates `expr` over every (ticker, date) of `slice`.
///
/// Leading dates t < max_lookback are masked for every ticker. `source` labels the
/// result; it defaults to the printed expression. Throws EvalError when a required
/// field is absent or the slice is not longer than the lookback.
AlphaSeries evaluate(const dsl::AlphaExpr& expr, const data::PanelSlice& slice, std::string source = {});

struct BatchItem {
    std::optional<AlphaSeries> series;
    std::string error;

    bool ok() const { return series.has_value(); }
};

/// Evaluates each expression independently; failures are recorded per item.
/// Output order follows input order and does not depend on `threads`.
/// `threads` = 0 picks the hardware concurrency.
std::vector<BatchItem> evaluate_batch(const std::vector<dsl::AlphaExpr>& exprs, const data::PanelSlice& slice,
                                      unsigned threads = 0);

/// CLOSE(t + horizon) / CLOSE(t) - 1; the last `horizon` dates are missing.
AlphaSeries forward_returns(const data::PanelSlice& slice, int horizon = 1);

}  // namespace alphaforge::eval
