#include "volpic/picard.hpp"

#include <chrono>
#include <unordered_map>

namespace volpic {

namespace {

// Series powers of the state components, shared across one rule evaluation
// sweep.
class PowerCache {
  public:
    PowerCache(const IterationState& state, const Coefficient& lower)
        : state_(state) {
        const Series& y = state.components.at(0);
        t_series_ = Series::constant(
            lower.backend() == y.backend() ? lower : lower.promote(y.digits()),
            y.point(), y.order());
        if (y.order() >= 1) {
            Coefficient one(1L);
            if (y.backend() == Backend::bigfloat) one = one.promote(y.digits());
            t_series_.set(1, one);
        }
    }

    const Series& base(VarId v) const {
        if (v == kTimeVar) return t_series_;
        if (v >= state_.components.size())
            throw solve_error("rule references component v" + std::to_string(v) +
                              " beyond the system arity");
        return state_.components[v];
    }

    const Series& power(VarId v, unsigned e) {
        auto& ladder = powers_[v];
        if (ladder.empty()) ladder.push_back(base(v));
        while (ladder.size() < e) ladder.push_back(ladder.back() * base(v));
        return ladder[e - 1];
    }

  private:
    const IterationState& state_;
    Series t_series_{Coefficient(0L), 0, Backend::rational, 0};
    std::unordered_map<VarId, std::vector<Series>> powers_;
};

Series eval_poly(const Polynomial& p, PowerCache& cache, const Series& like) {
    Series acc(like.point(), like.order(), like.backend(), like.digits());
    for (const auto& [mono, coeff] : p.terms()) {
        Coefficient c = coeff.backend() == like.backend()
                            ? coeff
                            : coeff.to_backend(like.backend(), like.digits());
        if (mono.factors.empty()) {
            acc.set(0, acc[0] + c);
            continue;
        }
        Series term = cache.power(mono.factors[0].first, mono.factors[0].second);
        for (std::size_t i = 1; i < mono.factors.size(); ++i)
            term = term * cache.power(mono.factors[i].first, mono.factors[i].second);
        acc = acc + term.scaled(c);
    }
    return acc;
}

Series eval_rule(const PolyRule& rule, const Coefficient* constant, PowerCache& cache,
                 const Series& like) {
    Series acc = eval_poly(rule.explicit_part, cache, like);
    if (constant) acc.set(0, acc[0] + *constant);
    for (const auto& [outer, integrand] : rule.integral_terms) {
        Series inner = eval_poly(integrand, cache, like).integrated();
        acc = acc + eval_poly(outer, cache, like) * inner;
    }
    return acc;
}

int stable_prefix(const std::vector<Series>& before, const std::vector<Series>& after) {
    const Series& first = before.at(0);
    Coefficient tol = first.backend() == Backend::rational
                          ? Coefficient(0L)
                          : Coefficient::pow10(4 - first.digits(), Backend::bigfloat,
                                               first.digits());
    int order = first.order();
    for (int d = 0; d <= order; ++d) {
        for (std::size_t c = 0; c < before.size(); ++c) {
            bool same = first.backend() == Backend::rational
                            ? before[c][d] == after[c][d]
                            : Coefficient::within(before[c][d], after[c][d], tol);
            if (!same) return d - 1;
        }
    }
    return order;
}

}  // namespace

IterationState initial_state(const AugmentedSystem& sys, Backend backend, int digits,
                             int order) {
    auto initials = sys.initial_values(backend, digits);
    return initial_state(sys, backend, digits, order, initials[0]);
}

IterationState initial_state(const AugmentedSystem& sys, Backend backend, int digits,
                             int order, const Coefficient& y_start) {
    IterationState st;
    st.initials = sys.initial_values(backend, digits);
    Coefficient point = backend == Backend::rational ? sys.lower
                                                     : sys.lower.promote(digits);
    Coefficient y0 = y_start.backend() == backend ? y_start
                                                  : y_start.to_backend(backend, digits);
    st.components.push_back(Series::constant(y0, point, order));
    for (std::size_t j = 1; j < st.initials.size(); ++j)
        st.components.push_back(Series::constant(st.initials[j], point, order));
    return st;
}

std::vector<Series> rhs_eval(const AugmentedSystem& sys, const IterationState& state) {
    if (static_cast<int>(state.components.size()) != sys.component_count())
        throw solve_error("state arity does not match the system");
    PowerCache cache(state, sys.lower);
    const Series& like = state.components[0];
    std::vector<Series> out;
    out.reserve(state.components.size());
    out.push_back(eval_rule(sys.y_rule, nullptr, cache, like));
    for (std::size_t j = 0; j < sys.v_rules.size(); ++j)
        out.push_back(eval_rule(sys.v_rules[j], &state.initials[j + 1], cache, like));
    return out;
}

IterationState step(const AugmentedSystem& sys, const IterationState& state) {
    IterationState next;
    next.k = state.k + 1;
    next.initials = state.initials;
    next.components = rhs_eval(sys, state);
    next.stable_degree = stable_prefix(state.components, next.components);
    return next;
}

std::vector<Series> residual(const AugmentedSystem& sys, const IterationState& state) {
    std::vector<Series> rhs = rhs_eval(sys, state);
    for (std::size_t c = 0; c < rhs.size(); ++c)
        rhs[c] = rhs[c] - state.components[c];
    return rhs;
}

SolveReport solve(const AugmentedSystem& sys, int order, int max_iters, SolveMode mode,
                  Backend backend, int digits) {
    auto initials = sys.initial_values(backend, digits);
    return solve(sys, order, max_iters, mode, backend, digits, initials[0]);
}

SolveReport solve(const AugmentedSystem& sys, int order, int max_iters, SolveMode mode,
                  Backend backend, int digits, const Coefficient& y_start) {
    if (max_iters < 1) throw solve_error("max_iters must be >= 1");
    auto start = std::chrono::steady_clock::now();
    SolveReport report;
    IterationState st = initial_state(sys, backend, digits, order, y_start);
    for (int it = 0; it < max_iters; ++it) {
        st = step(sys, st);
        report.trace.push_back(st.stable_degree);
        if (mode == SolveMode::stabilize && st.stable_degree >= order) break;
    }
    report.iterations = static_cast<int>(report.trace.size());
    report.final_state = std::move(st);
    auto end = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    return report;
}

}  // namespace volpic
