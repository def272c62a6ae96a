// Text front end: the equation DSL, kernel separation, and .vie files.
//
// Grammar:
//   equation := "y(t)" "=" expr
//   expr     := ["-"] term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := base ("^" INT)?
//   base     := NUMBER | "t" | "s" | "y(s)" | FUNC "(" expr ")" | "(" expr ")"
//             | "int(" expr "," "s=" NUMBER ".." "t" ")"
//   FUNC     := sin | cos | exp | ln | tan | arccot | cot
// Whitespace is insignificant; "#" starts a comment running to end of line.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volpic/expr.hpp"

namespace volpic {

/// Positioned syntax or conformance error; exits with code 2 at the CLI.
struct parse_error : std::runtime_error {
    int line, column;
    parse_error(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(col_) + ")"),
          line(line_),
          column(col_) {}
};

/// One separable integral contribution: f(t) * int(kernel(s, y(s)) ds).
struct KernelTerm {
    Expr f;       // in t only
    Expr kernel;  // in s and y only
};

/// y(t) = phi(t) + sum_i f_i(t) * int_a^t k_i(s, y(s)) ds
struct Equation {
    Expr phi;
    std::vector<KernelTerm> terms;
    Coefficient lower;  // a
    std::string label;

    /// phi evaluated at the lower limit; the value of the equation at t = a.
    Expr y0_expr() const { return phi; }
};

/// Parses an equation, applies the trig-difference rewrite, and separates
/// the kernel. Throws parse_error.
Equation parse(const std::string& text, const std::string& label = "");

/// The splitting step alone: rhs must contain at most one integral node.
/// Returns phi and the factored (f, kernel) pairs.
Equation split_kernel(const Expr& rhs, const std::string& label = "");

/// Parses a closed-form expression in t (no integral, no y); used for
/// --reference.
Expr parse_reference(const std::string& text);

/// A .vie file: optional "order:", "iters:", "precision:", "label:" header
/// lines followed by the equation.
struct EquationFile {
    Equation equation;
    std::optional<int> order;
    std::optional<int> iters;
    std::optional<int> precision;
};

EquationFile parse_vie(const std::string& contents, const std::string& fallback_label);
EquationFile load_vie(const std::string& path);

}  // namespace volpic
