#include "volpic/expr.hpp"

#include <sstream>

namespace volpic {

namespace expr {

namespace {
Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }
}  // namespace

Expr constant(Coefficient c) {
    ExprNode n{ExprKind::constant};
    n.value = std::move(c);
    return node(std::move(n));
}

Expr constant(long v) { return constant(Coefficient(v)); }

Expr var(std::string name) {
    ExprNode n{ExprKind::var};
    n.name = std::move(name);
    return node(std::move(n));
}

Expr add(Expr a, Expr b) {
    ExprNode n{ExprKind::add};
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr sub(Expr a, Expr b) {
    ExprNode n{ExprKind::sub};
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr mul(Expr a, Expr b) {
    ExprNode n{ExprKind::mul};
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr div(Expr a, Expr b) {
    ExprNode n{ExprKind::div};
    n.a = std::move(a);
    n.b = std::move(b);
    return node(std::move(n));
}

Expr neg(Expr a) {
    ExprNode n{ExprKind::neg};
    n.a = std::move(a);
    return node(std::move(n));
}

Expr int_pow(Expr base, int exponent) {
    if (exponent < 1) throw std::invalid_argument("integer power exponent must be >= 1");
    if (exponent == 1) return base;
    ExprNode n{ExprKind::int_pow};
    n.a = std::move(base);
    n.exponent = exponent;
    return node(std::move(n));
}

Expr apply(TransFn fn, Expr arg) {
    ExprNode n{ExprKind::apply};
    n.fn = fn;
    n.a = std::move(arg);
    return node(std::move(n));
}

Expr integral(Expr integrand, Coefficient lower) {
    ExprNode n{ExprKind::integral};
    n.a = std::move(integrand);
    n.lower = std::move(lower);
    return node(std::move(n));
}

}  // namespace expr

bool expr_equal(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::constant:
            return a->value.backend() == b->value.backend() && a->value == b->value;
        case ExprKind::var:
            return a->name == b->name;
        case ExprKind::neg:
            return expr_equal(a->a, b->a);
        case ExprKind::int_pow:
            return a->exponent == b->exponent && expr_equal(a->a, b->a);
        case ExprKind::apply:
            return a->fn == b->fn && expr_equal(a->a, b->a);
        case ExprKind::integral:
            return a->lower == b->lower && expr_equal(a->a, b->a);
        default:
            return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
    }
}

Expr constant_fold(const Expr& e) {
    if (!e) return e;
    switch (e->kind) {
        case ExprKind::constant:
        case ExprKind::var:
            return e;
        default:
            break;
    }
    Expr a = e->a ? constant_fold(e->a) : nullptr;
    Expr b = e->b ? constant_fold(e->b) : nullptr;
    auto is_const = [](const Expr& x) {
        return x && x->kind == ExprKind::constant &&
               x->value.backend() == Backend::rational;
    };
    switch (e->kind) {
        case ExprKind::add:
            if (is_const(a) && is_const(b)) return expr::constant(a->value + b->value);
            return expr::add(a, b);
        case ExprKind::sub:
            if (is_const(a) && is_const(b)) return expr::constant(a->value - b->value);
            return expr::sub(a, b);
        case ExprKind::mul:
            if (is_const(a) && is_const(b)) return expr::constant(a->value * b->value);
            return expr::mul(a, b);
        case ExprKind::div:
            if (is_const(a) && is_const(b)) {
                if (b->value.is_zero()) throw std::domain_error("division by zero constant");
                return expr::constant(a->value / b->value);
            }
            return expr::div(a, b);
        case ExprKind::neg:
            if (is_const(a)) return expr::constant(-a->value);
            return expr::neg(a);
        case ExprKind::int_pow:
            if (is_const(a)) return expr::constant(a->value.pow(e->exponent));
            return expr::int_pow(a, e->exponent);
        case ExprKind::apply:
            return expr::apply(e->fn, a);
        case ExprKind::integral:
            return expr::integral(a, e->lower);
        default:
            return e;
    }
}

namespace {

// Print precedences: additive 1, multiplicative 2, power 3, atom 4.
// Negations and negative constants rank additive so they re-parse cleanly.
int precedence(const Expr& e) {
    switch (e->kind) {
        case ExprKind::add:
        case ExprKind::sub:
        case ExprKind::neg:
            return 1;
        case ExprKind::constant:
            return e->value.sign() < 0 ? 1 : 4;
        case ExprKind::mul:
        case ExprKind::div:
            return 2;
        case ExprKind::int_pow:
            return 3;
        default:
            return 4;
    }
}

void render(const Expr& e, int min_prec, std::string& out) {
    bool parens = precedence(e) < min_prec;
    if (parens) out += "(";
    switch (e->kind) {
        case ExprKind::constant:
            out += e->value.str();
            break;
        case ExprKind::var:
            out += e->name == "y" ? "y(s)" : e->name;
            break;
        case ExprKind::add:
            render(e->a, 1, out);
            out += " + ";
            render(e->b, 2, out);
            break;
        case ExprKind::sub:
            render(e->a, 1, out);
            out += " - ";
            render(e->b, 2, out);
            break;
        case ExprKind::mul:
            render(e->a, 2, out);
            out += "*";
            render(e->b, 3, out);
            break;
        case ExprKind::div:
            render(e->a, 2, out);
            out += "/";
            render(e->b, 3, out);
            break;
        case ExprKind::neg:
            out += "-";
            render(e->a, 2, out);
            break;
        case ExprKind::int_pow:
            render(e->a, 4, out);
            out += "^" + std::to_string(e->exponent);
            break;
        case ExprKind::apply:
            out += trans_fn_name(e->fn);
            out += "(";
            render(e->a, 0, out);
            out += ")";
            break;
        case ExprKind::integral:
            out += "int(";
            render(e->a, 0, out);
            out += ", s=" + e->lower.str() + "..t)";
            break;
    }
    if (parens) out += ")";
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    render(e, 0, out);
    return out;
}

bool mentions_var(const Expr& e, const std::vector<std::string>& names) {
    if (!e) return false;
    if (e->kind == ExprKind::var) {
        for (const auto& n : names)
            if (e->name == n) return true;
        return false;
    }
    return mentions_var(e->a, names) || mentions_var(e->b, names);
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
    if (!e) return e;
    if (e->kind == ExprKind::var) return e->name == name ? replacement : e;
    if (!e->a) return e;
    Expr a = substitute(e->a, name, replacement);
    Expr b = e->b ? substitute(e->b, name, replacement) : nullptr;
    ExprNode n = *e;
    n.a = a;
    n.b = b;
    return std::make_shared<const ExprNode>(std::move(n));
}

Coefficient eval_numeric(const Expr& e,
                         const std::map<std::string, Coefficient>& bindings,
                         int digits) {
    switch (e->kind) {
        case ExprKind::constant:
            return e->value.backend() == Backend::bigfloat ? e->value.promote(digits)
                                                           : e->value.promote(digits);
        case ExprKind::var: {
            auto it = bindings.find(e->name);
            if (it == bindings.end())
                throw std::invalid_argument("unbound variable in evaluation: " + e->name);
            return it->second.backend() == Backend::rational
                       ? it->second.promote(digits)
                       : it->second;
        }
        case ExprKind::add:
            return eval_numeric(e->a, bindings, digits) + eval_numeric(e->b, bindings, digits);
        case ExprKind::sub:
            return eval_numeric(e->a, bindings, digits) - eval_numeric(e->b, bindings, digits);
        case ExprKind::mul:
            return eval_numeric(e->a, bindings, digits) * eval_numeric(e->b, bindings, digits);
        case ExprKind::div: {
            Coefficient d = eval_numeric(e->b, bindings, digits);
            if (d.is_zero()) throw std::domain_error("division by zero in evaluation");
            return eval_numeric(e->a, bindings, digits) / d;
        }
        case ExprKind::neg:
            return -eval_numeric(e->a, bindings, digits);
        case ExprKind::int_pow:
            return eval_numeric(e->a, bindings, digits).pow(e->exponent);
        case ExprKind::apply:
            return transcendental_constant(e->fn, eval_numeric(e->a, bindings, digits),
                                           digits);
        case ExprKind::integral:
            throw std::invalid_argument("cannot numerically evaluate an integral node");
    }
    throw std::logic_error("unreachable");
}

std::optional<Coefficient> eval_exact(
    const Expr& e, const std::map<std::string, Coefficient>& bindings) {
    switch (e->kind) {
        case ExprKind::constant:
            if (e->value.backend() != Backend::rational) return std::nullopt;
            return e->value;
        case ExprKind::var: {
            auto it = bindings.find(e->name);
            if (it == bindings.end() || it->second.backend() != Backend::rational)
                return std::nullopt;
            return it->second;
        }
        case ExprKind::add: {
            auto a = eval_exact(e->a, bindings), b = eval_exact(e->b, bindings);
            if (!a || !b) return std::nullopt;
            return *a + *b;
        }
        case ExprKind::sub: {
            auto a = eval_exact(e->a, bindings), b = eval_exact(e->b, bindings);
            if (!a || !b) return std::nullopt;
            return *a - *b;
        }
        case ExprKind::mul: {
            auto a = eval_exact(e->a, bindings), b = eval_exact(e->b, bindings);
            if (!a || !b) return std::nullopt;
            return *a * *b;
        }
        case ExprKind::div: {
            auto a = eval_exact(e->a, bindings), b = eval_exact(e->b, bindings);
            if (!a || !b || b->is_zero()) return std::nullopt;
            return *a / *b;
        }
        case ExprKind::neg: {
            auto a = eval_exact(e->a, bindings);
            if (!a) return std::nullopt;
            return -*a;
        }
        case ExprKind::int_pow: {
            auto a = eval_exact(e->a, bindings);
            if (!a) return std::nullopt;
            return a->pow(e->exponent);
        }
        case ExprKind::apply: {
            auto a = eval_exact(e->a, bindings);
            if (!a) return std::nullopt;
            // Exact special points only.
            if (a->is_zero()) {
                switch (e->fn) {
                    case TransFn::sin:
                    case TransFn::tan:
                        return Coefficient(0L);
                    case TransFn::cos:
                    case TransFn::exp:
                        return Coefficient(1L);
                    default:
                        return std::nullopt;
                }
            }
            if (e->fn == TransFn::ln && *a == Coefficient(1L)) return Coefficient(0L);
            return std::nullopt;
        }
        case ExprKind::integral:
            return std::nullopt;
    }
    return std::nullopt;
}

Expr differentiate_sym(const Expr& e, const std::string& var) {
    using namespace expr;
    switch (e->kind) {
        case ExprKind::constant:
            return constant(0L);
        case ExprKind::var:
            if (e->name == var) return constant(1L);
            if (e->name == "y" && var == "t") return expr::var(y_prime_name());
            return constant(0L);
        case ExprKind::add:
            return add(differentiate_sym(e->a, var), differentiate_sym(e->b, var));
        case ExprKind::sub:
            return sub(differentiate_sym(e->a, var), differentiate_sym(e->b, var));
        case ExprKind::mul:
            return add(mul(differentiate_sym(e->a, var), e->b),
                       mul(e->a, differentiate_sym(e->b, var)));
        case ExprKind::div: {
            // d(u/w) = (u'w - uw') / w^2; for constant u this is -u*w'/w^2.
            Expr du = differentiate_sym(e->a, var);
            Expr dw = differentiate_sym(e->b, var);
            Expr num = sub(mul(du, e->b), mul(e->a, dw));
            return div(num, int_pow(e->b, 2));
        }
        case ExprKind::neg:
            return neg(differentiate_sym(e->a, var));
        case ExprKind::int_pow: {
            Expr du = differentiate_sym(e->a, var);
            Expr lower = e->exponent == 2 ? e->a : int_pow(e->a, e->exponent - 1);
            return mul(mul(constant(static_cast<long>(e->exponent)), lower), du);
        }
        case ExprKind::apply: {
            Expr u = e->a;
            Expr du = differentiate_sym(u, var);
            switch (e->fn) {
                case TransFn::sin:
                    return mul(apply(TransFn::cos, u), du);
                case TransFn::cos:
                    return mul(neg(apply(TransFn::sin, u)), du);
                case TransFn::exp:
                    return mul(apply(TransFn::exp, u), du);
                case TransFn::ln:
                    return div(du, u);
                case TransFn::tan:
                    return mul(add(constant(1L), int_pow(apply(TransFn::tan, u), 2)), du);
                case TransFn::arccot:
                    return div(neg(du), add(constant(1L), int_pow(u, 2)));
                case TransFn::cot:
                    return mul(neg(add(constant(1L), int_pow(apply(TransFn::cot, u), 2))),
                               du);
            }
            throw std::logic_error("unreachable");
        }
        case ExprKind::integral:
            throw std::invalid_argument("cannot symbolically differentiate an integral node");
    }
    throw std::logic_error("unreachable");
}

namespace {

bool is_time_var(const Expr& e) {
    return e && e->kind == ExprKind::var && (e->name == "t" || e->name == "s");
}

bool is_const_value(const Expr& e, long v) {
    return e && e->kind == ExprKind::constant &&
           e->value.backend() == Backend::rational && e->value == Coefficient(v);
}

template <typename Fn>
Expr map_children(const Expr& e, Fn&& fn) {
    if (!e || !e->a) return e;
    Expr a = fn(e->a);
    Expr b = e->b ? fn(e->b) : nullptr;
    if (a == e->a && b == e->b) return e;
    ExprNode n = *e;
    n.a = a;
    n.b = b;
    return std::make_shared<const ExprNode>(std::move(n));
}

}  // namespace

Expr rewrite_trig_difference(const Expr& e) {
    if (!e) return e;
    Expr r = map_children(e, [](const Expr& c) { return rewrite_trig_difference(c); });
    if (r->kind == ExprKind::apply && (r->fn == TransFn::cos || r->fn == TransFn::sin) &&
        r->a->kind == ExprKind::sub && is_time_var(r->a->a) && is_time_var(r->a->b) &&
        r->a->a->name != r->a->b->name) {
        using namespace expr;
        Expr alpha = r->a->a, beta = r->a->b;
        Expr sa = apply(TransFn::sin, alpha), ca = apply(TransFn::cos, alpha);
        Expr sb = apply(TransFn::sin, beta), cb = apply(TransFn::cos, beta);
        if (r->fn == TransFn::cos) return add(mul(ca, cb), mul(sa, sb));
        return sub(mul(sa, cb), mul(ca, sb));
    }
    return r;
}

Expr rewrite_for_closure(const Expr& e) {
    if (!e) return e;
    Expr r = map_children(e, [](const Expr& c) { return rewrite_for_closure(c); });
    if (r->kind == ExprKind::apply) {
        using namespace expr;
        if (r->fn == TransFn::tan)
            return div(apply(TransFn::sin, r->a), apply(TransFn::cos, r->a));
        if ((r->fn == TransFn::sin || r->fn == TransFn::cos) &&
            r->a->kind == ExprKind::mul) {
            Expr u;
            if (is_const_value(r->a->a, 2) && is_time_var(r->a->b))
                u = r->a->b;
            else if (is_const_value(r->a->b, 2) && is_time_var(r->a->a))
                u = r->a->a;
            if (u) {
                Expr su = apply(TransFn::sin, u), cu = apply(TransFn::cos, u);
                if (r->fn == TransFn::sin) return mul(constant(2L), mul(su, cu));
                return sub(int_pow(cu, 2), int_pow(su, 2));
            }
        }
    }
    return r;
}

}  // namespace volpic
