// The Picard iteration engine: applies the augmented system's update rules
// to vectors of truncated series until an iteration budget or coefficient
// stabilization is reached.
#pragma once

#include <vector>

#include "volpic/polynomialize.hpp"
#include "volpic/series.hpp"

namespace volpic {

/// Thrown on arity/backend errors during iteration; exits 4 at the CLI.
struct solve_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IterationState {
    int k = 0;
    std::vector<Series> components;      // 0 = y, 1..r = v_j
    int stable_degree = -1;              // largest d with coeffs 0..d unchanged
    std::vector<Coefficient> initials;   // additive constants of the v-rules
};

enum class SolveMode { fixed_iters, stabilize };

struct SolveReport {
    IterationState final_state;
    int iterations = 0;
    std::vector<int> trace;  // stable_degree after each iteration
    double wall_ms = 0.0;
};

/// Constant initialization y^[0] = y(a), v_j^[0] = v_j(a). `y_start`
/// overrides the y component (used to probe initialization independence).
IterationState initial_state(const AugmentedSystem& sys, Backend backend, int digits,
                             int order);
IterationState initial_state(const AugmentedSystem& sys, Backend backend, int digits,
                             int order, const Coefficient& y_start);

/// One simultaneous update: every component evaluates its rule on iterate k.
IterationState step(const AugmentedSystem& sys, const IterationState& state);

/// Right-hand sides evaluated at the state, without advancing it.
std::vector<Series> rhs_eval(const AugmentedSystem& sys, const IterationState& state);

/// Per component: rule(state) - component. Coefficients 0..stable_degree of
/// a converged state vanish.
std::vector<Series> residual(const AugmentedSystem& sys, const IterationState& state);

SolveReport solve(const AugmentedSystem& sys, int order, int max_iters, SolveMode mode,
                  Backend backend, int digits);
SolveReport solve(const AugmentedSystem& sys, int order, int max_iters, SolveMode mode,
                  Backend backend, int digits, const Coefficient& y_start);

/// Default iteration budget for stabilize mode.
inline int default_budget(int order) { return order + 4; }

}  // namespace volpic
