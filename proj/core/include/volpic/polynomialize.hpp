// Auxiliary-variable polynomialization: assigns a variable to every
// non-polynomial subexpression of phi, f, and the kernel, closes the set
// under differentiation, and assembles the augmented polynomial Volterra
// system the Picard engine iterates.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "volpic/expr.hpp"
#include "volpic/parser.hpp"
#include "volpic/polynomial.hpp"

namespace volpic {

/// Thrown when the closure cannot complete (variable cap, degree cap,
/// missing y', unsupported node); exits with code 3 at the CLI.
struct closure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// v_j together with its defining expression g_j(t, y) and the polynomial
/// right-hand side of v_j' = P_j.
struct AuxVariable {
    VarId id;
    Expr defining;   // canonical, in t (and possibly y)
    Polynomial rhs;  // P_j over {y, v_1..v_r, t}
};

/// One component's update: explicit polynomial part evaluated at t plus a
/// sum of outer(t) * integral(integrand(s)) contributions.
struct PolyRule {
    Polynomial explicit_part;
    std::vector<std::pair<Polynomial, Polynomial>> integral_terms;
};

struct ClosureOptions {
    int var_cap = 32;
    int degree_cap = 16;
};

/// The assembled system: component 0 is y, components 1..r the auxiliaries.
/// y follows y_rule; v_j follows v_j(a) + the single integral term of
/// v_rules[j-1].
struct AugmentedSystem {
    Equation source;
    std::vector<AuxVariable> vars;
    PolyRule y_rule;
    std::vector<PolyRule> v_rules;
    std::optional<Polynomial> y_prime;  // set when every f is a rational constant
    Coefficient lower;                  // a

    int component_count() const { return static_cast<int>(vars.size()) + 1; }
    std::string component_name(int index) const;

    /// [y(a), v_1(a), ..., v_r(a)]. On the rational backend every value must
    /// evaluate exactly; throws closure_error otherwise.
    std::vector<Coefficient> initial_values(Backend backend, int digits) const;
    /// True when every initial value has an exact rational value.
    bool rational_initials() const;
};

AugmentedSystem assemble(const Equation& eq, const ClosureOptions& opts = {});

/// y' as a polynomial over the system variables, available exactly when
/// every factored coefficient f_i is a rational constant.
std::optional<Polynomial> derive_y_prime(const Equation& eq,
                                         const ClosureOptions& opts = {});

/// Re-expresses an expression against a frozen variable roster. Throws
/// closure_error when a subexpression is not covered.
Polynomial to_polynomial(const Expr& e, const AugmentedSystem& sys);

}  // namespace volpic
