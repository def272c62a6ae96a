#include "doctest.h"
#include "support/test_util.hpp"
#include "volpic/parser.hpp"

#include <random>

using namespace volpic;
using volpic_test::rat;

namespace {

// Rebuilds the equation's DSL text for the round-trip property.
std::string equation_text(const Equation& eq) {
    std::string rhs = to_string(eq.phi);
    for (const auto& term : eq.terms) {
        rhs += " + ";
        bool unit_f = term.f->kind == ExprKind::constant &&
                      term.f->value.backend() == Backend::rational &&
                      term.f->value == rat(1);
        if (!unit_f) rhs += "(" + to_string(term.f) + ")*";
        rhs += "int(" + to_string(term.kernel) + ", s=" + eq.lower.str() + "..t)";
    }
    return "y(t) = " + rhs;
}

bool equations_equal(const Equation& a, const Equation& b) {
    if (!expr_equal(a.phi, b.phi)) return false;
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (!expr_equal(a.terms[i].f, b.terms[i].f)) return false;
        if (!expr_equal(a.terms[i].kernel, b.terms[i].kernel)) return false;
    }
    return a.lower == b.lower;
}

Coefficient eval1(const Expr& e, const Coefficient& t, int digits = 40) {
    return eval_numeric(e, {{"t", t}}, digits);
}

}  // namespace

TEST_SUITE_BEGIN("expr");

TEST_CASE("parsing the factored-coefficient form") {
    Equation eq = parse(
        "y(t) = exp(t)*sin(t) + (2+cos(t)) * int(y(s)/(2+cos(s)), s=0..t)");
    Expr phi = expr::mul(expr::apply(TransFn::exp, expr::var("t")),
                         expr::apply(TransFn::sin, expr::var("t")));
    CHECK(expr_equal(eq.phi, phi));
    REQUIRE(eq.terms.size() == 1);
    Expr f = expr::add(expr::constant(2L), expr::apply(TransFn::cos, expr::var("t")));
    CHECK(expr_equal(eq.terms[0].f, f));
    Expr kernel = expr::div(
        expr::var("y"),
        expr::add(expr::constant(2L), expr::apply(TransFn::cos, expr::var("s"))));
    CHECK(expr_equal(eq.terms[0].kernel, kernel));
    CHECK(eq.lower == rat(0));
}

TEST_CASE("t-only factors written inside the integrand move into f") {
    Equation eq =
        parse("y(t) = exp(t)*sin(t) + int((2+cos(t))/(2+cos(s)) * y(s), s=0..t)");
    REQUIRE(eq.terms.size() == 1);
    Expr f = expr::add(expr::constant(2L), expr::apply(TransFn::cos, expr::var("t")));
    CHECK(expr_equal(eq.terms[0].f, f));
    CHECK(!mentions_var(eq.terms[0].kernel, {"t"}));
}

TEST_CASE("sign normalization folds the minus into the kernel") {
    Equation eq = parse("y(t) = 1 - int(sin(y(s)), s=0..t)");
    CHECK(expr_equal(eq.phi, expr::constant(1L)));
    REQUIRE(eq.terms.size() == 1);
    CHECK(expr_equal(eq.terms[0].f, expr::constant(1L)));
    CHECK(expr_equal(eq.terms[0].kernel,
                     expr::neg(expr::apply(TransFn::sin, expr::var("y")))));
}

TEST_CASE("degenerate equation without an integral") {
    Equation eq = parse("y(t) = 0");
    CHECK(expr_equal(eq.phi, expr::constant(0L)));
    CHECK(eq.terms.empty());
}

TEST_CASE("kernel with no t keeps f = 1") {
    Equation eq = parse("y(t) = t + int(y(s)^2, s=0..t)");
    REQUIRE(eq.terms.size() == 1);
    CHECK(expr_equal(eq.terms[0].f, expr::constant(1L)));
}

TEST_CASE("cosine difference kernels split into two factored terms") {
    Equation eq = parse("y(t) = (1/2)*sin(2*t) + int((3/2)*y(s)^2*cos(s - t), s=0..t)");
    REQUIRE(eq.terms.size() == 2);
    CHECK(to_string(eq.terms[0].f) == "3/2*cos(t)");
    CHECK(to_string(eq.terms[0].kernel) == "y(s)^2*cos(s)");
    CHECK(to_string(eq.terms[1].f) == "3/2*sin(t)");
    CHECK(to_string(eq.terms[1].kernel) == "y(s)^2*sin(s)");
}

TEST_CASE("trig difference rewrite") {
    Expr cst = expr::apply(TransFn::cos, expr::sub(expr::var("s"), expr::var("t")));
    Expr rewritten = rewrite_trig_difference(cst);
    Expr expect = expr::add(
        expr::mul(expr::apply(TransFn::cos, expr::var("s")),
                  expr::apply(TransFn::cos, expr::var("t"))),
        expr::mul(expr::apply(TransFn::sin, expr::var("s")),
                  expr::apply(TransFn::sin, expr::var("t"))));
    CHECK(expr_equal(rewritten, expect));

    Expr plain = expr::apply(TransFn::cos, expr::var("t"));
    CHECK(expr_equal(rewrite_trig_difference(plain), plain));

    Expr sts = expr::apply(TransFn::sin, expr::sub(expr::var("t"), expr::var("s")));
    Expr expect2 = expr::sub(
        expr::mul(expr::apply(TransFn::sin, expr::var("t")),
                  expr::apply(TransFn::cos, expr::var("s"))),
        expr::mul(expr::apply(TransFn::cos, expr::var("t")),
                  expr::apply(TransFn::sin, expr::var("s"))));
    CHECK(expr_equal(rewrite_trig_difference(sts), expect2));
}

TEST_CASE("trig rewrites preserve value") {
    std::mt19937 rng(20250807);
    std::uniform_int_distribution<long> num(-20, 20);
    int p = 32;
    Coefficient tol = Coefficient::pow10(1 - p, Backend::bigfloat, p);
    Expr e = expr::apply(TransFn::cos, expr::sub(expr::var("s"), expr::var("t")));
    Expr r = rewrite_trig_difference(e);
    Expr d = expr::apply(TransFn::sin, expr::mul(expr::constant(2L), expr::var("t")));
    Expr rd = rewrite_for_closure(d);
    for (int i = 0; i < 25; ++i) {
        Coefficient tv = Coefficient(num(rng), 7L).promote(p);
        Coefficient sv = Coefficient(num(rng), 9L).promote(p);
        Coefficient before = eval_numeric(e, {{"t", tv}, {"s", sv}}, p);
        Coefficient after = eval_numeric(r, {{"t", tv}, {"s", sv}}, p);
        CHECK(Coefficient::within(before, after, tol));
        Coefficient b2 = eval_numeric(d, {{"t", tv}}, p);
        Coefficient a2 = eval_numeric(rd, {{"t", tv}}, p);
        CHECK(Coefficient::within(b2, a2, tol));
    }
}

TEST_CASE("numeric evaluation of the closed forms") {
    Expr ex1 = parse_reference(
        "exp(t)*sin(t) + exp(t)*(2 + cos(t))*(ln(3) - ln(2 + cos(t)))");
    Coefficient at0 = eval1(ex1, rat(0), 64);
    CHECK(at0.abs().cmp(Coefficient::pow10(-60, Backend::bigfloat, 64)) <= 0);

    Expr ex4 = parse_reference("2*arccot(cot(1/2)*exp(t))");
    Coefficient v0 = eval1(ex4, rat(0), 64);
    CHECK(Coefficient::within(v0, rat(1).promote(64),
                              Coefficient::pow10(-60, Backend::bigfloat, 64)));

    // Two precisions agree: the 30-digit value is a stable reference.
    Coefficient a30 = eval1(ex1, rat(1), 30);
    Coefficient a50 = eval1(ex1, rat(1), 50);
    CHECK(Coefficient::within(a30.promote(50), a50,
                              Coefficient::pow10(-28, Backend::bigfloat, 50)));
}

TEST_CASE("symbolic differentiation follows the chain rule through y") {
    Expr siny = expr::apply(TransFn::sin, expr::var("y"));
    Expr d = differentiate_sym(siny, "t");
    Expr expect = expr::mul(expr::apply(TransFn::cos, expr::var("y")),
                            expr::var(expr::y_prime_name()));
    CHECK(expr_equal(d, expect));
}

TEST_CASE("symbolic derivatives match values") {
    int p = 40;
    Coefficient tol = Coefficient::pow10(-30, Backend::bigfloat, p);
    Coefficient t = Coefficient(3, 10).promote(p);

    Expr f = expr::add(expr::constant(2L), expr::apply(TransFn::cos, expr::var("t")));
    Coefficient df = eval1(differentiate_sym(f, "t"), t, p);
    Coefficient expect = -transcendental_constant(TransFn::sin, t, p);
    CHECK(Coefficient::within(df, expect, tol));

    // d(1/v) = -v'/v^2 with v = cos t.
    Expr recip = expr::div(expr::constant(1L), expr::apply(TransFn::cos, expr::var("t")));
    Coefficient dr = eval1(differentiate_sym(recip, "t"), t, p);
    Coefficient c = transcendental_constant(TransFn::cos, t, p);
    Coefficient s = transcendental_constant(TransFn::sin, t, p);
    CHECK(Coefficient::within(dr, s / (c * c), tol));
}

TEST_CASE("derivatives agree with central finite differences") {
    int p = 32;
    // Relative agreement to 1e-8 at points inside each domain.
    Coefficient h = Coefficient::pow10(-10, Backend::bigfloat, p);
    for (TransFn fn : {TransFn::sin, TransFn::cos, TransFn::exp, TransFn::ln,
                       TransFn::tan, TransFn::arccot, TransFn::cot}) {
        for (long ni = 3; ni <= 11; ni += 4) {
            Coefficient x = Coefficient(ni, 10).promote(p);
            Expr g = expr::apply(fn, expr::var("t"));
            Coefficient sym = eval_numeric(differentiate_sym(g, "t"), {{"t", x}}, p);
            Coefficient fd = (eval_numeric(g, {{"t", x + h}}, p) -
                              eval_numeric(g, {{"t", x - h}}, p)) /
                             (h + h);
            Coefficient rel = ((sym - fd) / sym).abs();
            CHECK(rel.cmp(Coefficient::pow10(-8, Backend::bigfloat, p)) <= 0);
        }
    }
}

TEST_CASE("positioned parse errors") {
    CHECK_THROWS_AS(parse("y(t) = int("), parse_error);
    try {
        parse("y(t) = \n  1 + qq(t)");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 0);
    }
    try {
        parse("y(t) = int(y(s), s=0..t) + int(y(s)^2, s=0..t)");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("multiple integral terms") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("y(t) = y(s)"), parse_error);
    CHECK_THROWS_AS(parse("y(t) = s + 1"), parse_error);
    CHECK_THROWS_AS(parse("y(t) = int(int(y(s), s=0..t), s=0..t)"), parse_error);
    CHECK_THROWS_AS(parse("y(t) = int(cos(s*t)*y(s), s=0..t)"), parse_error);
    CHECK_THROWS_AS(parse("y(t) = 1 + sin(int(y(s), s=0..t))"), parse_error);
}

TEST_CASE("decimal literals parse to exact rationals") {
    Equation eq = parse("y(t) = 0.5*t");
    CHECK(expr_equal(eq.phi, expr::mul(expr::constant(rat(1, 2)), expr::var("t"))));
}

TEST_CASE("exact evaluation handles the special points") {
    CHECK(*eval_exact(expr::apply(TransFn::sin, expr::constant(0L)), {}) == rat(0));
    CHECK(*eval_exact(expr::apply(TransFn::exp, expr::constant(0L)), {}) == rat(1));
    CHECK(*eval_exact(expr::apply(TransFn::ln, expr::constant(1L)), {}) == rat(0));
    CHECK(!eval_exact(expr::apply(TransFn::sin, expr::constant(1L)), {}).has_value());
}

TEST_CASE("parse-print round trip on the shipped corpus") {
    for (const std::string name : {"exp_sin", "sine", "tangent", "arccot"}) {
        Equation eq = volpic_test::load_example(name).equation;
        Equation again = parse(equation_text(eq), eq.label);
        CHECK_MESSAGE(equations_equal(eq, again), "round trip failed for ", name);
    }
    // A few synthetic shapes.
    for (const std::string text :
         {"y(t) = 1 - int(sin(y(s)), s=0..t)", "y(t) = -t + t^2",
          "y(t) = (1+t)*(1-t) + int(y(s)*s, s=0..t)",
          "y(t) = 1/2 + int(1/(1+y(s)^2), s=0..t)"}) {
        Equation eq = parse(text);
        CHECK(equations_equal(eq, parse(equation_text(eq))));
    }
}

TEST_SUITE_END();
