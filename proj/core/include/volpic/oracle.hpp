// Independent numerical check: the classical trapezoid method for
// second-kind Volterra equations. Consumes the parsed equation only, never
// the polynomialized system.
#pragma once

#include <string>
#include <vector>

#include "volpic/parser.hpp"
#include "volpic/picard.hpp"
#include "volpic/series.hpp"

namespace volpic {

struct GridSolution {
    Coefficient h;
    std::vector<Coefficient> nodes;   // t_0 = a .. t_M
    std::vector<Coefficient> values;  // y_0 .. y_M, big float
};

/// Marches y_n = phi(t_n) + sum_i f_i(t_n) * h * (trapezoid sum of
/// k_i(t_j, y_j)) with a damped inner fixed point per node. Global error
/// O(h^2) for smooth data. Throws solve_error when an inner fixed point
/// fails to converge within 200 sweeps.
GridSolution trapezoid_solve(const Equation& eq, const Coefficient& h,
                             const Coefficient& T, int digits);

/// max over grid nodes in [lo, hi] of |series(t_n) - y_n|.
Coefficient compare_max_abs(const Series& series, const GridSolution& grid,
                            const Coefficient& lo, const Coefficient& hi);

/// "t,y" rows at full precision.
std::string grid_to_csv(const GridSolution& grid);

/// Series with all coefficients (and the expansion point) promoted to the
/// big-float backend.
Series promoted(const Series& s, int digits);

}  // namespace volpic
