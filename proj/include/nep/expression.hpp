#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace nep {

/// A compiled arithmetic expression in one variable `u`.
///
/// Grammar (whitespace ignored):
///   expr    := sum
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?            right-associative
///   primary := number | 'u' | 'e' | '(' expr ')'
///            | ('exp' | 'ln' | 'log' | 'sqrt') '(' expr ')'
///            | 'piecewise' '(' expr relop expr ',' expr ',' expr ')'
///   relop   := '<' | '<=' | '>' | '>='
///
/// `piecewise(a < b, x, y)` evaluates x when the comparison holds, else y.
class Expression {
public:
    static Expression parse(std::string_view text);

    double operator()(double u) const;
    const std::string& source() const noexcept { return source_; }

    struct Node;

private:
    Expression(std::string source, std::shared_ptr<const Node> root);

    std::string source_;
    std::shared_ptr<const Node> root_;
};

}  // namespace nep
