#pragma once

#include "alphaforge/dsl/ast.h"

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace alphaforge::dsl {

enum class ExprKind { TimeSeries, CrossSection, Mixed };

std::string_view to_string(ExprKind kind);

struct ExprMeta {
    std::set<std::string> required_fields;
    /// Leading dates an evaluation cannot fill: sum of window depths along the deepest path.
    int max_lookback = 0;
    /// TimeSeries: reads trailing windows only. CrossSection: single-date (pointwise or
    /// cross-sectional functions). Mixed: both.
    ExprKind kind = ExprKind::CrossSection;

    friend bool operator==(const ExprMeta&, const ExprMeta&) = default;
};

ExprMeta analyze(const AlphaExpr& expr);

class InvalidExpression : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checks a programmatically built tree against the function registry and window rules.
void validate(const AlphaExpr& expr);

}  // namespace alphaforge::dsl
