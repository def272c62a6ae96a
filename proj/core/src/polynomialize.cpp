#include "volpic/polynomialize.hpp"

#include <deque>
#include <map>

namespace volpic {

namespace {

// Table key: the defining expression rendered in the time variable t.
Expr canonical(const Expr& e) {
    return constant_fold(substitute(e, "s", expr::var("t")));
}

bool is_atom_var(const Expr& e) {
    return e->kind == ExprKind::var;
}

class Polynomializer {
  public:
    Polynomializer(const Equation& eq, const ClosureOptions& opts, bool frozen = false)
        : eq_(eq), opts_(opts), frozen_(frozen) {}

    // Seeds a frozen polynomializer from an existing roster.
    void adopt_roster(const std::vector<AuxVariable>& vars) {
        for (const auto& v : vars) {
            keys_.push_back(to_string(v.defining));
            defs_.push_back(v.defining);
        }
    }

    AugmentedSystem run() {
        AugmentedSystem sys;
        sys.source = eq_;
        sys.lower = eq_.lower;

        Expr phi = rewrite_for_closure(constant_fold(eq_.phi));
        std::vector<Expr> kernels, fs;
        for (const auto& term : eq_.terms) {
            kernels.push_back(rewrite_for_closure(canonical(term.kernel)));
            fs.push_back(rewrite_for_closure(constant_fold(term.f)));
        }

        // Variable-introduction order: phi, then the kernels, then the
        // factored coefficients (which by then usually hit the table).
        Polynomial P = to_polynomial(phi);
        std::vector<Polynomial> R, Q;
        for (const auto& k : kernels) R.push_back(to_polynomial(k));
        compute_y_prime_if_available(phi, R);
        for (const auto& f : fs) Q.push_back(to_polynomial(f));

        // Close the set under differentiation.
        while (!pending_.empty()) {
            std::size_t idx = pending_.front();
            pending_.pop_front();
            Expr derivative = differentiate_sym(defs_[idx], "t");
            rhss_[idx] = to_polynomial(derivative);
        }

        sys.y_rule.explicit_part = check_degree(P);
        for (std::size_t i = 0; i < R.size(); ++i)
            sys.y_rule.integral_terms.emplace_back(check_degree(Q[i]), check_degree(R[i]));
        for (std::size_t j = 0; j < defs_.size(); ++j) {
            AuxVariable v;
            v.id = static_cast<VarId>(j + 1);
            v.defining = defs_[j];
            v.rhs = check_degree(rhss_[j]);
            sys.vars.push_back(std::move(v));
            PolyRule rule;
            rule.integral_terms.emplace_back(Polynomial::constant(Coefficient(1L)),
                                             sys.vars.back().rhs);
            sys.v_rules.push_back(std::move(rule));
        }
        sys.y_prime = y_prime_;
        return sys;
    }

    Polynomial to_polynomial(const Expr& e) {
        // A tabled defining expression stands for its variable.
        if (!is_atom_var(e) && e->kind != ExprKind::constant) {
            if (auto id = lookup(to_string(canonical(e)))) return Polynomial::variable(*id);
        }
        switch (e->kind) {
            case ExprKind::constant:
                return Polynomial::constant(e->value);
            case ExprKind::var:
                if (e->name == "t" || e->name == "s") return Polynomial::variable(kTimeVar);
                if (e->name == "y") return Polynomial::variable(kYVar);
                if (e->name == expr::y_prime_name()) return y_prime_poly();
                throw closure_error("unknown variable '" + e->name + "' in polynomialization");
            // Binary cases sequence the left operand first: variable ids
            // follow left-to-right encounter order.
            case ExprKind::add: {
                Polynomial a = to_polynomial(e->a);
                return a + to_polynomial(e->b);
            }
            case ExprKind::sub: {
                Polynomial a = to_polynomial(e->a);
                return a - to_polynomial(e->b);
            }
            case ExprKind::neg:
                return -to_polynomial(e->a);
            case ExprKind::mul: {
                Polynomial a = to_polynomial(e->a);
                return a * to_polynomial(e->b);
            }
            case ExprKind::int_pow:
                return to_polynomial(e->a).pow(static_cast<unsigned>(e->exponent));
            case ExprKind::div:
                return divide(e->a, e->b);
            case ExprKind::apply:
                // Post-order: the argument's own variables register first.
                to_polynomial(e->a);
                return Polynomial::variable(ensure_var(canonical(e)));
            case ExprKind::integral:
                throw closure_error("integral node inside a polynomialized expression");
        }
        throw std::logic_error("unreachable");
    }

  private:
    const Equation& eq_;
    ClosureOptions opts_;
    bool frozen_;
    std::vector<std::string> keys_;
    std::vector<Expr> defs_;
    std::vector<Polynomial> rhss_;
    std::deque<std::size_t> pending_;

    enum class YPrime { unknown, available, unavailable };
    YPrime y_prime_state_ = YPrime::unknown;
    std::optional<Polynomial> y_prime_;

    std::optional<VarId> lookup(const std::string& key) const {
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] == key) return static_cast<VarId>(i + 1);
        return std::nullopt;
    }

    VarId ensure_var(const Expr& defining) {
        std::string key = to_string(defining);
        if (auto id = lookup(key)) return *id;
        if (frozen_)
            throw closure_error("subexpression '" + key + "' is not covered by the roster");
        if (static_cast<int>(defs_.size()) >= opts_.var_cap)
            throw closure_error("closure exceeds the auxiliary-variable cap (" +
                                std::to_string(opts_.var_cap) + ")");
        keys_.push_back(key);
        defs_.push_back(defining);
        rhss_.emplace_back();
        pending_.push_back(defs_.size() - 1);
        return static_cast<VarId>(defs_.size());
    }

    // Division: constant denominators divide through; anything else goes
    // through a reciprocal variable, with the denominator itself named as a
    // variable when it is a composite expression.
    Polynomial divide(const Expr& num, const Expr& den) {
        Polynomial out = to_polynomial(num);
        Expr d = canonical(den);
        if (d->kind == ExprKind::constant) {
            if (d->value.is_zero()) throw closure_error("division by zero");
            return out.scaled(Coefficient(1L) / d->value);
        }
        int sign = 1;
        std::vector<std::pair<Expr, unsigned>> parts;
        collect_denominator(d, sign, parts);
        if (sign < 0) out = -out;
        for (const auto& [base, exp] : parts) {
            if (base->kind == ExprKind::constant) {
                out = out.scaled((Coefficient(1L) / base->value).pow(exp));
                continue;
            }
            if (!is_atom_var(base)) ensure_var(base);  // name the denominator
            VarId recip = ensure_var(constant_fold(expr::div(expr::constant(1L), base)));
            out = out * Polynomial::variable(recip).pow(exp);
        }
        return out;
    }

    void collect_denominator(const Expr& d, int& sign,
                             std::vector<std::pair<Expr, unsigned>>& parts) {
        switch (d->kind) {
            case ExprKind::mul:
                collect_denominator(d->a, sign, parts);
                collect_denominator(d->b, sign, parts);
                return;
            case ExprKind::neg:
                sign = -sign;
                collect_denominator(d->a, sign, parts);
                return;
            case ExprKind::int_pow:
                parts.emplace_back(d->a, static_cast<unsigned>(d->exponent));
                return;
            default:
                parts.emplace_back(d, 1);
        }
    }

    const Polynomial& y_prime_poly() {
        if (y_prime_state_ == YPrime::available) return *y_prime_;
        throw closure_error(
            "closure requires y' but the factored coefficient f is not constant");
    }

    void compute_y_prime_if_available(const Expr& phi, const std::vector<Polynomial>& R) {
        std::vector<Coefficient> consts;
        for (const auto& term : eq_.terms) {
            Expr f = constant_fold(term.f);
            if (mentions_var(f, {"t", "s", "y"})) {
                y_prime_state_ = YPrime::unavailable;
                return;
            }
            auto c = eval_exact(f, {});
            if (!c) {
                y_prime_state_ = YPrime::unavailable;
                return;
            }
            consts.push_back(*c);
        }
        // y' = phi'(t) + sum c_i * k_i(t, y)
        Polynomial p = to_polynomial(differentiate_sym(phi, "t"));
        for (std::size_t i = 0; i < R.size(); ++i) p = p + R[i].scaled(consts[i]);
        y_prime_ = std::move(p);
        y_prime_state_ = YPrime::available;
    }

    Polynomial check_degree(const Polynomial& p) const {
        if (static_cast<int>(p.degree()) > opts_.degree_cap)
            throw closure_error("polynomial degree exceeds the cap (" +
                                std::to_string(opts_.degree_cap) + ")");
        return p;
    }
};

}  // namespace

std::string AugmentedSystem::component_name(int index) const {
    return index == 0 ? "y" : "v" + std::to_string(index);
}

std::vector<Coefficient> AugmentedSystem::initial_values(Backend backend,
                                                         int digits) const {
    std::vector<Coefficient> out;
    std::map<std::string, Coefficient> at_a{{"t", lower}};
    Coefficient y0(0L);
    if (backend == Backend::rational) {
        auto v = eval_exact(source.phi, at_a);
        if (!v)
            throw closure_error(
                "initial value y(a) has no exact rational value; use the float backend");
        y0 = *v;
    } else {
        y0 = eval_numeric(source.phi, {{"t", lower.promote(digits)}}, digits);
    }
    out.push_back(y0);
    for (const auto& var : vars) {
        if (backend == Backend::rational) {
            auto v = eval_exact(var.defining, {{"t", lower}, {"y", y0}});
            if (!v)
                throw closure_error("initial value of " + default_var_name(var.id) +
                                    " = " + to_string(var.defining) +
                                    " has no exact rational value; use the float backend");
            out.push_back(*v);
        } else {
            out.push_back(eval_numeric(var.defining,
                                       {{"t", lower.promote(digits)}, {"y", y0}}, digits));
        }
    }
    return out;
}

bool AugmentedSystem::rational_initials() const {
    try {
        initial_values(Backend::rational, 0);
        return true;
    } catch (const closure_error&) {
        return false;
    }
}

AugmentedSystem assemble(const Equation& eq, const ClosureOptions& opts) {
    Polynomializer p(eq, opts);
    return p.run();
}

std::optional<Polynomial> derive_y_prime(const Equation& eq, const ClosureOptions& opts) {
    return assemble(eq, opts).y_prime;
}

Polynomial to_polynomial(const Expr& e, const AugmentedSystem& sys) {
    Polynomializer p(sys.source, ClosureOptions{}, /*frozen=*/true);
    p.adopt_roster(sys.vars);
    return p.to_polynomial(rewrite_for_closure(constant_fold(e)));
}

}  // namespace volpic
