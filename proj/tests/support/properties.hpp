// Property checks shared by the unit suites and the acceptance binary.
#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "support/test_util.hpp"
#include "volpic/oracle.hpp"
#include "volpic/picard.hpp"
#include "volpic/polynomialize.hpp"

namespace volpic_test {

using namespace volpic;

/// O(N^2) reference convolution, independent of Series::operator*.
inline std::vector<Coefficient> brute_force_product(const std::vector<Coefficient>& p,
                                                    const std::vector<Coefficient>& q) {
    std::size_t n = p.size();
    std::vector<Coefficient> r(n, Coefficient(0L));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + i < n; ++j)
            r[i + j] = r[i + j] + p[i] * q[j];
    return r;
}

inline Series random_series(std::mt19937& rng, int order) {
    Series s(Coefficient(0L), order, Backend::rational, 0);
    for (int j = 0; j <= order; ++j) s.set(j, random_rational(rng));
    return s;
}

/// Cauchy product vs brute force, exact, `cases` random pairs, N <= 64.
inline void check_mul_vs_brute_force(int cases, unsigned seed = 20250801) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> order_dist(0, 64);
    for (int c = 0; c < cases; ++c) {
        int n = order_dist(rng);
        Series p = random_series(rng, n), q = random_series(rng, n);
        Series prod = p * q;
        auto expect = brute_force_product(p.coeffs(), q.coeffs());
        for (int j = 0; j <= n; ++j)
            if (!(prod[j] == expect[j]))
                throw std::runtime_error("cauchy product mismatch at case " +
                                         std::to_string(c));
    }
}

/// differentiate(integrate(p)) reproduces coefficients 0..N-1 exactly.
inline void check_integrate_differentiate(int cases, unsigned seed = 20250802) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> order_dist(1, 40);
    for (int c = 0; c < cases; ++c) {
        int n = order_dist(rng);
        Series p = random_series(rng, n);
        Series back = p.integrated().differentiated();
        for (int j = 0; j < n; ++j)
            if (!(back[j] == p[j]))
                throw std::runtime_error("integrate/differentiate identity failed");
    }
}

/// For every auxiliary variable, d/dt g_j(t) along the exact solution equals
/// P_j at the corresponding numeric values, to `tol_exp` decimal digits.
inline void check_closure_soundness(const AugmentedSystem& sys, const Expr& solution,
                                    int digits, int tol_exp) {
    Coefficient tol = Coefficient::pow10(-tol_exp, Backend::bigfloat, digits);
    for (int pt = 1; pt <= 5; ++pt) {
        Coefficient t = Coefficient(pt, 10L).promote(digits);
        Coefficient yt = eval_numeric(solution, {{"t", t}}, digits);
        auto value_of = [&](VarId v) -> Coefficient {
            if (v == kTimeVar) return t;
            if (v == kYVar) return yt;
            Expr tilde = substitute(sys.vars[v - 1].defining, "y", solution);
            return eval_numeric(tilde, {{"t", t}}, digits);
        };
        for (const auto& var : sys.vars) {
            Expr tilde = substitute(var.defining, "y", solution);
            Coefficient lhs = eval_numeric(differentiate_sym(tilde, "t"), {{"t", t}}, digits);
            Coefficient rhs = var.rhs.eval(value_of, Backend::bigfloat, digits);
            Coefficient scale = Coefficient(1L).promote(digits) + lhs.abs();
            if (!Coefficient::within(lhs, rhs, tol * scale))
                throw std::runtime_error("closure soundness failed for " +
                                         default_var_name(var.id) + " at t = " + t.str() +
                                         ": " + (lhs - rhs).str());
        }
    }
}

/// Non-decreasing trace with stable_degree >= min(k-1, N) at iteration k.
inline void check_monotone_trace(const std::vector<int>& trace, int order,
                                 const std::string& label) {
    int prev = -1;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        int k = static_cast<int>(i) + 1;
        if (trace[i] < std::min(k - 1, order))
            throw std::runtime_error(label + ": stable_degree " +
                                     std::to_string(trace[i]) + " < min(k-1, N) at k=" +
                                     std::to_string(k));
        if (trace[i] < prev)
            throw std::runtime_error(label + ": stable_degree trace decreased");
        prev = trace[i];
    }
}

}  // namespace volpic_test
