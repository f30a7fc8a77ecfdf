#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace alphaforge::dsl {

enum class BinaryOp { Add, Sub, Mul, Div, Pow, Gt, Lt, Ge, Le, Eq };

std::string_view symbol(BinaryOp op);
bool is_comparison(BinaryOp op);

class Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
    double value;
};

struct FieldRef {
    std::string name;  // upper-case
};

struct Negate {
    NodePtr operand;
};

struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};

/// Registered function application. Window arguments are Literal nodes holding positive integers.
struct Call {
    std::string function;  // upper-case, as written (aliases are kept)
    std::vector<NodePtr> args;
};

struct Conditional {
    NodePtr cond;
    NodePtr then_branch;
    NodePtr else_branch;
};

class Node {
public:
    using Variant = std::variant<Literal, FieldRef, Negate, Binary, Call, Conditional>;

    explicit Node(Variant v) : v_(std::move(v)) {}
    const Variant& variant() const { return v_; }

    template <class T>
    const T* as() const { return std::get_if<T>(&v_); }

private:
    Variant v_;
};

bool structurally_equal(const Node& a, const Node& b);

/// Immutable expression tree for a formulaic alpha. Cheap to copy; subtrees are shared.
class AlphaExpr {
public:
    AlphaExpr() = default;
    explicit AlphaExpr(NodePtr root) : root_(std::move(root)) {}

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    bool valid() const { return static_cast<bool>(root_); }

    friend bool operator==(const AlphaExpr& a, const AlphaExpr& b) {
        if (!a.root_ || !b.root_) return a.root_ == b.root_;
        return structurally_equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
};

// Tree builders.
NodePtr lit(double v);
NodePtr field(std::string name);
NodePtr neg(NodePtr x);
NodePtr bin(BinaryOp op, NodePtr l, NodePtr r);
NodePtr call(std::string fn, std::vector<NodePtr> args);
NodePtr cond(NodePtr c, NodePtr a, NodePtr b);

}  // namespace alphaforge::dsl
