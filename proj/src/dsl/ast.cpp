#include "alphaforge/dsl/ast.h"

namespace alphaforge::dsl {

std::string_view symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Pow: return "^";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Eq: return "==";
    }
    return "?";
}

bool is_comparison(BinaryOp op) {
    return op == BinaryOp::Gt || op == BinaryOp::Lt || op == BinaryOp::Ge || op == BinaryOp::Le ||
           op == BinaryOp::Eq;
}

namespace {

struct EqualVisitor {
    const Node::Variant& other;

    bool operator()(const Literal& a) const { return a.value == std::get<Literal>(other).value; }
    bool operator()(const FieldRef& a) const { return a.name == std::get<FieldRef>(other).name; }
    bool operator()(const Negate& a) const {
        return structurally_equal(*a.operand, *std::get<Negate>(other).operand);
    }
    bool operator()(const Binary& a) const {
        const auto& b = std::get<Binary>(other);
        return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
    bool operator()(const Call& a) const {
        const auto& b = std::get<Call>(other);
        if (a.function != b.function || a.args.size() != b.args.size()) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (!structurally_equal(*a.args[i], *b.args[i])) return false;
        }
        return true;
    }
    bool operator()(const Conditional& a) const {
        const auto& b = std::get<Conditional>(other);
        return structurally_equal(*a.cond, *b.cond) && structurally_equal(*a.then_branch, *b.then_branch) &&
               structurally_equal(*a.else_branch, *b.else_branch);
    }
};

}  // namespace

bool structurally_equal(const Node& a, const Node& b) {
    if (&a == &b) return true;
    if (a.variant().index() != b.variant().index()) return false;
    return std::visit(EqualVisitor{b.variant()}, a.variant());
}

NodePtr lit(double v) { return std::make_shared<const Node>(Literal{v}); }
NodePtr field(std::string name) { return std::make_shared<const Node>(FieldRef{std::move(name)}); }
NodePtr neg(NodePtr x) { return std::make_shared<const Node>(Negate{std::move(x)}); }
NodePtr bin(BinaryOp op, NodePtr l, NodePtr r) {
    return std::make_shared<const Node>(Binary{op, std::move(l), std::move(r)});
}
NodePtr call(std::string fn, std::vector<NodePtr> args) {
    return std::make_shared<const Node>(Call{std::move(fn), std::move(args)});
}
NodePtr cond(NodePtr c, NodePtr a, NodePtr b) {
    return std::make_shared<const Node>(Conditional{std::move(c), std::move(a), std::move(b)});
}

}  // namespace alphaforge::dsl
