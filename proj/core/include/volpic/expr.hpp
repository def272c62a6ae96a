// Expression trees for equations and closed-form references: numeric
// evaluation, symbolic differentiation, and the trig rewrites the
// polynomializer relies on.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "volpic/coeff.hpp"

namespace volpic {

enum class ExprKind {
    constant,
    var,       // t, s, y, or the internal marker y'
    add,
    sub,
    mul,
    div,
    neg,
    int_pow,   // integer exponent >= 1
    apply,     // one of TransFn
    integral,  // int(integrand, s = lower .. t)
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    Coefficient value;    // constant
    std::string name;     // var
    TransFn fn = TransFn::sin;
    int exponent = 0;     // int_pow
    Expr a, b;            // children
    Coefficient lower;    // integral lower limit
};

namespace expr {

Expr constant(Coefficient c);
Expr constant(long n);
Expr var(std::string name);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr int_pow(Expr base, int exponent);
Expr apply(TransFn fn, Expr arg);
Expr integral(Expr integrand, Coefficient lower);

/// The internal derivative marker for the unknown.
inline const char* y_prime_name() { return "y'"; }

}  // namespace expr

/// Structural equality of trees.
bool expr_equal(const Expr& a, const Expr& b);

/// Folds constant-only subtrees into single constants (exact rational
/// arithmetic; transcendental applications are left alone).
Expr constant_fold(const Expr& e);

/// DSL-syntax rendering; parse(to_string(e)) reproduces e.
std::string to_string(const Expr& e);

/// True when the tree mentions any of the given variable names.
bool mentions_var(const Expr& e, const std::vector<std::string>& names);

/// Replaces every occurrence of a variable with another expression.
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

/// Big-float evaluation with all free variables bound. Throws
/// std::domain_error on ln <= 0 or division by zero, std::invalid_argument
/// on unbound variables.
Coefficient eval_numeric(const Expr& e,
                         const std::map<std::string, Coefficient>& bindings,
                         int digits);

/// Exact rational evaluation. Succeeds only when every subexpression has an
/// exact rational value (transcendentals at their special points: sin 0,
/// cos 0, exp 0, ln 1, tan 0). Returns nullopt otherwise.
std::optional<Coefficient> eval_exact(
    const Expr& e, const std::map<std::string, Coefficient>& bindings);

/// d e / d var. The unknown y is treated as y(t): d y / d t is the marker
/// y'. Integral nodes are rejected.
Expr differentiate_sym(const Expr& e, const std::string& var);

/// Expands cos/sin of a difference of the two time variables into products
/// of single-variable sin/cos. Other nodes pass through unchanged.
Expr rewrite_trig_difference(const Expr& e);

/// Expands sin(2u) and cos(2u), u in {t, s}, into products of sin u and
/// cos u, and rewrites tan u as sin u / cos u. Applied before closure.
Expr rewrite_for_closure(const Expr& e);

}  // namespace volpic
