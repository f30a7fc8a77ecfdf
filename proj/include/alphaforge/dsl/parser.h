#pragma once

#include "alphaforge/dsl/ast.h"

#include <stdexcept>
#include <string>
#include <string_view>

namespace alphaforge::dsl {

/// Syntax or signature error; `column` is 1-based into the source text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t column)
        : std::runtime_error("column " + std::to_string(column) + ": " + message),
          message_(message),
          column_(column) {}

    const std::string& message() const { return message_; }
    std::size_t column() const { return column_; }

private:
    std::string message_;
    std::size_t column_;
};

/// Parses a formulaic alpha.
///
/// Precedence, tightest first: `^` (right-associative), unary minus, `* /`,
/// `+ -`, then comparisons, which are only accepted inside the condition of
/// IF. Identifiers are case-insensitive. A bare identifier that is not a
/// built-in indicator (RSI, ATR, MACD, BOLL_UP, ...) is a field reference.
AlphaExpr parse(std::string_view source);

/// Canonical fully-parenthesized text; parse(print(e)) == e.
std::string print(const AlphaExpr& expr);
std::string print(const Node& node);

}  // namespace alphaforge::dsl
