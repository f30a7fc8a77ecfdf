#include "alphaforge/dsl/analysis.h"

#include "alphaforge/dsl/registry.h"

#include <algorithm>
#include <cmath>

namespace alphaforge::dsl {

std::string_view to_string(ExprKind kind) {
    switch (kind) {
        case ExprKind::TimeSeries: return "time-series";
        case ExprKind::CrossSection: return "cross-section";
        case ExprKind::Mixed: return "mixed";
    }
    return "?";
}

namespace {

struct Walk {
    std::set<std::string> fields;
    bool time_series = false;
    bool cross_section = false;

    int visit(const Node& node) {
        return std::visit([this](const auto& n) { return this->on(n); }, node.variant());
    }

    int on(const Literal&) { return 0; }
    int on(const FieldRef& f) {
        fields.insert(f.name);
        return 0;
    }
    int on(const Negate& n) { return visit(*n.operand); }
    int on(const Binary& b) { return std::max(visit(*b.lhs), visit(*b.rhs)); }
    int on(const Conditional& c) {
        return std::max({visit(*c.cond), visit(*c.then_branch), visit(*c.else_branch)});
    }
    int on(const Call& c) {
        const FunctionSpec* spec = find_function(c.function);
        if (!spec) throw InvalidExpression("unknown function '" + c.function + "'");
        for (auto f : spec->implicit_fields) fields.emplace(f);
        if (spec->cls == FunctionClass::TimeSeries) time_series = true;
        if (spec->cls == FunctionClass::CrossSection) cross_section = true;
        int inner = 0;
        int window = 0;
        for (std::size_t i = 0; i < c.args.size() && i < spec->args.size(); ++i) {
            if (spec->args[i] == ArgKind::Window) {
                window = static_cast<int>(c.args[i]->as<Literal>()->value);
            } else {
                inner = std::max(inner, visit(*c.args[i]));
            }
        }
        return inner + lookback_contribution(spec->kernel, window);
    }
};

void check(const Node& node) {
    std::visit(
        [](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Literal>) {
                if (!std::isfinite(n.value)) throw InvalidExpression("non-finite literal");
            } else if constexpr (std::is_same_v<T, FieldRef>) {
                if (n.name.empty()) throw InvalidExpression("empty field name");
            } else if constexpr (std::is_same_v<T, Negate>) {
                check(*n.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                check(*n.lhs);
                check(*n.rhs);
            } else if constexpr (std::is_same_v<T, Conditional>) {
                check(*n.cond);
                check(*n.then_branch);
                check(*n.else_branch);
            } else {
                const FunctionSpec* spec = find_function(n.function);
                if (!spec) throw InvalidExpression("unknown function '" + n.function + "'");
                if (n.args.size() != spec->args.size()) {
                    throw InvalidExpression("arity mismatch for " + n.function);
                }
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (!n.args[i]) throw InvalidExpression("null argument to " + n.function);
                    if (spec->args[i] == ArgKind::Window) {
                        const auto* l = n.args[i]->template as<Literal>();
                        if (!l || l->value < 1.0 || l->value != std::floor(l->value)) {
                            throw InvalidExpression("window of " + n.function + " must be a positive integer literal");
                        }
                    } else {
                        check(*n.args[i]);
                    }
                }
            }
        },
        node.variant());
}

}  // namespace

ExprMeta analyze(const AlphaExpr& expr) {
    Walk walk;
    ExprMeta meta;
    meta.max_lookback = walk.visit(expr.root());
    meta.required_fields = std::move(walk.fields);
    if (walk.time_series && walk.cross_section) {
        meta.kind = ExprKind::Mixed;
    } else if (walk.time_series) {
        meta.kind = ExprKind::TimeSeries;
    } else {
        meta.kind = ExprKind::CrossSection;
    }
    return meta;
}

void validate(const AlphaExpr& expr) {
    if (!expr.valid()) throw InvalidExpression("empty expression");
    check(expr.root());
}

}  // namespace alphaforge::dsl
