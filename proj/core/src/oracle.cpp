#include "volpic/oracle.hpp"

#include <sstream>

namespace volpic {

namespace {

Coefficient eval_kernel(const Expr& kernel, const Coefficient& s, const Coefficient& y,
                        int digits) {
    return eval_numeric(kernel, {{"s", s}, {"y", y}}, digits);
}

}  // namespace

GridSolution trapezoid_solve(const Equation& eq, const Coefficient& h,
                             const Coefficient& T, int digits) {
    if (h.sign() <= 0) throw std::invalid_argument("step h must be positive");
    Coefficient a = eq.lower.promote(digits);
    Coefficient hf = h.promote(digits);
    Coefficient Tf = T.promote(digits);
    if (!(a < Tf)) throw std::invalid_argument("horizon T must exceed the lower limit");

    long steps = static_cast<long>(((Tf - a) / hf).to_double() + 0.5);
    if (steps < 1) steps = 1;

    GridSolution grid;
    grid.h = hf;
    grid.nodes.reserve(steps + 1);
    grid.values.reserve(steps + 1);

    Coefficient y0 = eval_numeric(eq.phi, {{"t", a}}, digits);
    grid.nodes.push_back(a);
    grid.values.push_back(y0);

    const std::size_t m = eq.terms.size();
    Coefficient half = Coefficient(1L, 2L).promote(digits);
    Coefficient tol = Coefficient::pow10(4 - digits, Backend::bigfloat, digits);

    // Running interior sums: 1/2 k_i(t_0) + sum_{j=1}^{n-1} k_i(t_j).
    std::vector<Coefficient> interior;
    for (std::size_t i = 0; i < m; ++i)
        interior.push_back(half * eval_kernel(eq.terms[i].kernel, a, y0, digits));

    Coefficient y_prev = y0;
    for (long n = 1; n <= steps; ++n) {
        Coefficient tn = a + hf * Coefficient(n).promote(digits);
        Coefficient phi_n = eval_numeric(eq.phi, {{"t", tn}}, digits);
        std::vector<Coefficient> f_n;
        for (std::size_t i = 0; i < m; ++i)
            f_n.push_back(eval_numeric(eq.terms[i].f, {{"t", tn}}, digits));

        auto G = [&](const Coefficient& x) {
            Coefficient acc = phi_n;
            for (std::size_t i = 0; i < m; ++i) {
                Coefficient bracket =
                    interior[i] + half * eval_kernel(eq.terms[i].kernel, tn, x, digits);
                acc = acc + f_n[i] * hf * bracket;
            }
            return acc;
        };

        // Damped fixed point; damping engages on detected oscillation.
        Coefficient x = y_prev;
        Coefficient prev_delta = Coefficient::zero(Backend::bigfloat, digits);
        bool have_delta = false, damped = false, converged = false;
        for (int sweep = 0; sweep < 200; ++sweep) {
            Coefficient gx = G(x);
            Coefficient next = damped ? half * (x + gx) : gx;
            Coefficient delta = next - x;
            if (delta.abs().cmp(tol) <= 0) {
                x = next;
                converged = true;
                break;
            }
            if (have_delta && (delta * prev_delta).sign() < 0) damped = true;
            prev_delta = delta;
            have_delta = true;
            x = next;
        }
        if (!converged)
            throw solve_error("trapezoid inner fixed point failed to converge at t = " +
                              tn.str());

        grid.nodes.push_back(tn);
        grid.values.push_back(x);
        for (std::size_t i = 0; i < m; ++i)
            interior[i] = interior[i] + eval_kernel(eq.terms[i].kernel, tn, x, digits);
        y_prev = x;
    }
    return grid;
}

Series promoted(const Series& s, int digits) {
    if (s.backend() == Backend::bigfloat && s.digits() >= digits) return s;
    Series out(s.point().promote(digits), s.order(), Backend::bigfloat, digits);
    for (int j = 0; j <= s.order(); ++j) out.set(j, s[j].promote(digits));
    return out;
}

Coefficient compare_max_abs(const Series& series, const GridSolution& grid,
                            const Coefficient& lo, const Coefficient& hi) {
    if (grid.nodes.empty()) throw std::invalid_argument("empty grid");
    int digits = grid.values[0].digits();
    Series s = promoted(series, digits);
    Coefficient lof = lo.promote(digits), hif = hi.promote(digits);
    bool any = false;
    Coefficient best = Coefficient::zero(Backend::bigfloat, digits);
    for (std::size_t n = 0; n < grid.nodes.size(); ++n) {
        if (grid.nodes[n].cmp(lof) < 0 || grid.nodes[n].cmp(hif) > 0) continue;
        Coefficient dev = (s.evaluate(grid.nodes[n]) - grid.values[n]).abs();
        if (!any || best.cmp(dev) < 0) best = dev;
        any = true;
    }
    if (!any) throw std::invalid_argument("comparison window contains no grid nodes");
    return best;
}

std::string grid_to_csv(const GridSolution& grid) {
    std::ostringstream out;
    out << "t,y\n";
    for (std::size_t n = 0; n < grid.nodes.size(); ++n)
        out << grid.nodes[n].str() << "," << grid.values[n].str() << "\n";
    return out.str();
}

}  // namespace volpic
