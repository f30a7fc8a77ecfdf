#include "alphaforge/dsl/parser.h"

#include "alphaforge/dsl/registry.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

namespace alphaforge::dsl {

namespace {

enum class Tok { Number, Ident, LParen, RParen, Comma, Plus, Minus, Star, Slash, Caret, Cmp, End };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t pos;  // 0-based offset
    double number = 0.0;
    BinaryOp cmp = BinaryOp::Gt;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        const std::size_t start = i_;
        if (i_ >= src_.size()) return {Tok::End, {}, start};
        const char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i_ + 1 < src_.size() &&
                                                            std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
            return number(start);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) ++i_;
            return {Tok::Ident, src_.substr(start, i_ - start), start};
        }
        ++i_;
        switch (c) {
            case '(': return {Tok::LParen, src_.substr(start, 1), start};
            case ')': return {Tok::RParen, src_.substr(start, 1), start};
            case ',': return {Tok::Comma, src_.substr(start, 1), start};
            case '+': return {Tok::Plus, src_.substr(start, 1), start};
            case '-': return {Tok::Minus, src_.substr(start, 1), start};
            case '*': return {Tok::Star, src_.substr(start, 1), start};
            case '/': return {Tok::Slash, src_.substr(start, 1), start};
            case '^': return {Tok::Caret, src_.substr(start, 1), start};
            case '>':
            case '<': {
                bool eq = i_ < src_.size() && src_[i_] == '=';
                if (eq) ++i_;
                BinaryOp op = c == '>' ? (eq ? BinaryOp::Ge : BinaryOp::Gt) : (eq ? BinaryOp::Le : BinaryOp::Lt);
                return {Tok::Cmp, src_.substr(start, i_ - start), start, 0.0, op};
            }
            case '=':
                if (i_ < src_.size() && src_[i_] == '=') {
                    ++i_;
                    return {Tok::Cmp, src_.substr(start, 2), start, 0.0, BinaryOp::Eq};
                }
                break;
            default:
                break;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start + 1);
    }

private:
    Token number(std::size_t start) {
        auto digits = [&] {
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        };
        digits();
        if (i_ < src_.size() && src_[i_] == '.') {
            ++i_;
            digits();
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t save = i_;
            ++i_;
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
            if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                digits();
            } else {
                i_ = save;
            }
        }
        std::string_view text = src_.substr(start, i_ - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ParseError("malformed number '" + std::string(text) + "'", start + 1);
        }
        return {Tok::Number, text, start, v};
    }

    std::string_view src_;
    std::size_t i_ = 0;
};

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

// Bare identifiers that expand to fixed trees instead of field references.
std::optional<NodePtr> expand_macro(const std::string& name) {
    static const std::map<std::string, std::function<NodePtr()>, std::less<>> macros = {
        {"RSI", [] { return call("RSI", {lit(14)}); }},
        {"ATR", [] { return call("ATR", {lit(14)}); }},
        {"MACD",
         [] {
             return bin(BinaryOp::Sub, call("EMA", {field("CLOSE"), lit(12)}), call("EMA", {field("CLOSE"), lit(26)}));
         }},
        {"BOLL_UP",
         [] {
             return bin(BinaryOp::Add, call("SMA", {field("CLOSE"), lit(20)}),
                        bin(BinaryOp::Mul, lit(2), call("STD", {field("CLOSE"), lit(20)})));
         }},
        {"BOLL_DOWN",
         [] {
             return bin(BinaryOp::Sub, call("SMA", {field("CLOSE"), lit(20)}),
                        bin(BinaryOp::Mul, lit(2), call("STD", {field("CLOSE"), lit(20)})));
         }},
        {"TYPICAL_PRICE",
         [] {
             return bin(BinaryOp::Div, bin(BinaryOp::Add, bin(BinaryOp::Add, field("HIGH"), field("LOW")), field("CLOSE")),
                        lit(3));
         }},
        {"RETURNS",
         [] {
             return bin(BinaryOp::Sub, bin(BinaryOp::Div, field("CLOSE"), call("DELAY", {field("CLOSE"), lit(1)})),
                        lit(1));
         }},
        {"DRAWDOWN",
         [] { return bin(BinaryOp::Sub, lit(1), bin(BinaryOp::Div, field("CLOSE"), call("MAX", {field("CLOSE"), lit(14)}))); }},
    };
    static const std::map<std::string, std::string, std::less<>> aliases = {
        {"UPPER_BAND", "BOLL_UP"}, {"LOWER_BAND", "BOLL_DOWN"}, {"RETURN", "RETURNS"}};

    std::string key = name;
    if (auto a = aliases.find(key); a != aliases.end()) key = a->second;
    auto it = macros.find(key);
    if (it == macros.end()) return std::nullopt;
    return it->second();
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    AlphaExpr parse_all() {
        NodePtr root = comparison();
        if (cur_.kind == Tok::RParen) throw ParseError("unbalanced parentheses: unexpected ')'", cur_.pos + 1);
        if (cur_.kind != Tok::End) {
            throw ParseError("unexpected '" + std::string(cur_.text) + "'", cur_.pos + 1);
        }
        return AlphaExpr(std::move(root));
    }

private:
    void advance() { cur_ = lex_.next(); }

    NodePtr comparison() {
        NodePtr lhs = additive();
        if (cur_.kind != Tok::Cmp) return lhs;
        if (!comparison_allowed_) {
            throw ParseError("comparison '" + std::string(cur_.text) + "' is only allowed inside an IF condition",
                             cur_.pos + 1);
        }
        BinaryOp op = cur_.cmp;
        advance();
        return bin(op, std::move(lhs), additive());
    }

    NodePtr additive() {
        NodePtr lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            BinaryOp op = cur_.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            lhs = bin(op, std::move(lhs), term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            BinaryOp op = cur_.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            lhs = bin(op, std::move(lhs), unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (cur_.kind == Tok::Minus) {
            advance();
            return neg(unary());
        }
        if (cur_.kind == Tok::Plus) {
            advance();
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (cur_.kind != Tok::Caret) return base;
        advance();
        return bin(BinaryOp::Pow, std::move(base), unary());
    }

    NodePtr primary() {
        Token tok = cur_;
        switch (tok.kind) {
            case Tok::Number:
                advance();
                return lit(tok.number);
            case Tok::Ident: {
                advance();
                std::string name = upper(tok.text);
                if (cur_.kind == Tok::LParen) return call_expr(name, tok.pos);
                if (auto m = expand_macro(name)) return *m;
                return field(std::move(name));
            }
            case Tok::LParen: {
                advance();
                NodePtr inner = comparison();
                expect_close(tok.pos);
                return inner;
            }
            case Tok::RParen:
                throw ParseError("unbalanced parentheses: unexpected ')'", tok.pos + 1);
            case Tok::End:
                throw ParseError("unexpected end of expression", tok.pos + 1);
            default:
                throw ParseError("unexpected '" + std::string(tok.text) + "'", tok.pos + 1);
        }
    }

    void expect_close(std::size_t open_pos) {
        if (cur_.kind != Tok::RParen) {
            throw ParseError("unbalanced parentheses: '(' at column " + std::to_string(open_pos + 1) + " is never closed",
                             cur_.pos + 1);
        }
        advance();
    }

    NodePtr call_expr(const std::string& name, std::size_t name_pos) {
        const std::size_t open_pos = cur_.pos;
        advance();  // '('
        const bool is_if = name == "IF";
        const FunctionSpec* spec = is_if ? nullptr : find_function(name);
        if (!is_if && !spec) throw ParseError("unknown function '" + name + "'", name_pos + 1);

        std::vector<NodePtr> args;
        std::vector<std::size_t> arg_pos;
        if (cur_.kind != Tok::RParen) {
            while (true) {
                arg_pos.push_back(cur_.pos);
                const bool saved = comparison_allowed_;
                comparison_allowed_ = is_if && args.empty();
                args.push_back(comparison());
                comparison_allowed_ = saved;
                if (cur_.kind != Tok::Comma) break;
                advance();
            }
        }
        expect_close(open_pos);

        if (is_if) {
            if (args.size() != 3) {
                throw ParseError("arity mismatch: IF expects 3 arguments, got " + std::to_string(args.size()),
                                 name_pos + 1);
            }
            return cond(args[0], args[1], args[2]);
        }

        const std::size_t expected = spec->args.size();
        if (args.size() + 1 == expected && spec->default_window > 0 && spec->args.back() == ArgKind::Window) {
            args.push_back(lit(spec->default_window));
            arg_pos.push_back(name_pos);
        }
        if (args.size() != expected) {
            throw ParseError("arity mismatch: " + name + " expects " + std::to_string(expected) + " argument" +
                                 (expected == 1 ? "" : "s") + ", got " + std::to_string(args.size()),
                             name_pos + 1);
        }
        for (std::size_t i = 0; i < expected; ++i) {
            if (spec->args[i] != ArgKind::Window) continue;
            const auto* l = args[i]->as<Literal>();
            if (!l || l->value < 1.0 || l->value != std::floor(l->value) || l->value > 100000.0) {
                throw ParseError("non-integer window: argument " + std::to_string(i + 1) + " of " + name +
                                     " must be a positive integer literal",
                                 arg_pos[i] + 1);
            }
        }
        return call(name, std::move(args));
    }

    Lexer lex_;
    Token cur_{Tok::End, {}, 0};
    bool comparison_allowed_ = false;
};

std::string format_literal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct PrintVisitor {
    std::string operator()(const Literal& l) const { return format_literal(l.value); }
    std::string operator()(const FieldRef& f) const { return f.name; }
    std::string operator()(const Negate& n) const { return "(-" + print(*n.operand) + ")"; }
    std::string operator()(const Binary& b) const {
        return "(" + print(*b.lhs) + " " + std::string(symbol(b.op)) + " " + print(*b.rhs) + ")";
    }
    std::string operator()(const Call& c) const {
        std::string out = c.function + "(";
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) out += ", ";
            out += print(*c.args[i]);
        }
        return out + ")";
    }
    std::string operator()(const Conditional& c) const {
        std::string test;
        if (const auto* b = c.cond->as<Binary>(); b && is_comparison(b->op)) {
            test = print(*b->lhs) + " " + std::string(symbol(b->op)) + " " + print(*b->rhs);
        } else {
            test = print(*c.cond);
        }
        return "IF(" + test + ", " + print(*c.then_branch) + ", " + print(*c.else_branch) + ")";
    }
};

}  // namespace

AlphaExpr parse(std::string_view source) { return Parser(source).parse_all(); }

std::string print(const Node& node) { return std::visit(PrintVisitor{}, node.variant()); }

std::string print(const AlphaExpr& expr) { return print(expr.root()); }

}  // namespace alphaforge::dsl
