#include "doctest.h"
#include "support/mp_oracle.hpp"
#include "support/test_util.hpp"
#include "volpic/coeff.hpp"

#include <random>

using namespace volpic;
using volpic_test::rat;

TEST_SUITE_BEGIN("coeff");

TEST_CASE("exact rational arithmetic") {
    CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
    Coefficient x = rat(-7, 13);
    CHECK(x + rat(0) == x);
    CHECK(rat(2, 3) * rat(3, 4) == rat(1, 2));
    CHECK(x * rat(1) == x);
    Coefficient third = rat(1) / rat(3);
    CHECK(third == rat(1, 3));
    CHECK(third.str() == "1/3");
}

TEST_CASE("rationals stay in lowest terms with positive denominator") {
    CHECK(Coefficient(2, -6).str() == "-1/3");
    CHECK(Coefficient(-4, -8).str() == "1/2");
    CHECK(Coefficient::from_string("6/4").str() == "3/2");
    CHECK(Coefficient::from_string("0.5").str() == "1/2");
    CHECK(Coefficient::from_string("-2.25").str() == "-9/4");
}

TEST_CASE("division by zero and backend mixing are rejected") {
    CHECK_THROWS_AS(rat(1) / rat(0), std::domain_error);
    CHECK_THROWS_AS(rat(1) + rat(1).promote(40), backend_mismatch);
    CHECK_THROWS_AS(rat(1).promote(40) * rat(2), backend_mismatch);
}

TEST_CASE("transcendental constants at special points") {
    CHECK(transcendental_constant(TransFn::cos, rat(0), 32).decimal(5) == "1.00000");
    CHECK(transcendental_constant(TransFn::exp, rat(0), 32).decimal(5) == "1.00000");
    CHECK_THROWS_AS(transcendental_constant(TransFn::ln, rat(-1), 32), std::domain_error);
    CHECK_THROWS_AS(transcendental_constant(TransFn::ln, rat(0), 32), std::domain_error);
}

TEST_CASE("sin(1) and ln(3) against the rational Taylor oracle") {
    // Oracle values computed by exact rational partial sums; the frozen
    // 20-digit strings were produced from those sums.
    Coefficient sin1 = transcendental_constant(TransFn::sin, rat(1), 20);
    CHECK(sin1.str() == "0.84147098480789650665");
    CHECK(volpic_test::agree_to(sin1, volpic_test::sin_rational(rat(1), 24), 19, 40));

    Coefficient ln3 = transcendental_constant(TransFn::ln, rat(3), 20);
    CHECK(ln3.str() == "1.0986122886681096914");
    CHECK(volpic_test::agree_to(ln3, volpic_test::ln_rational(rat(3), 24), 19, 40));
}

TEST_CASE("sin(1) + cos(1) at 50 digits agrees with the independent oracle") {
    int p = 50;
    Coefficient sum = transcendental_constant(TransFn::sin, rat(1), p) +
                      transcendental_constant(TransFn::cos, rat(1), p);
    Coefficient oracle =
        volpic_test::sin_rational(rat(1), p + 6) + volpic_test::cos_rational(rat(1), p + 6);
    // Agreement to 48 digits.
    Coefficient diff = (sum - oracle.promote(p)).abs();
    CHECK(diff.cmp(Coefficient::pow10(-48, Backend::bigfloat, p)) <= 0);
}

TEST_CASE("arccot and cot undo each other") {
    int p = 40;
    Coefficient half = rat(1, 2);
    Coefficient back = transcendental_constant(
        TransFn::arccot, transcendental_constant(TransFn::cot, half, p), p);
    CHECK(volpic_test::agree_to(back, half, 38, p));
}

TEST_CASE("field axioms hold exactly on random rationals") {
    std::mt19937 rng(20250803);
    for (int i = 0; i < 200; ++i) {
        Coefficient x = volpic_test::random_rational(rng);
        Coefficient y = volpic_test::random_rational(rng);
        Coefficient z = volpic_test::random_rational(rng);
        CHECK((x + y) + z == x + (y + z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
        CHECK((x * y) * z == x * (y * z));
    }
}

TEST_CASE("float mode rounds within 10^(1-p) of the exact value") {
    std::mt19937 rng(20250804);
    int p = 32;
    Coefficient relative = Coefficient::pow10(1 - p, Backend::bigfloat, p + 16);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(100, 999);
    for (int i = 0; i < 100; ++i) {
        Coefficient x(num(rng), den(rng));
        Coefficient y(num(rng), den(rng));
        auto check_op = [&](const Coefficient& exact, const Coefficient& approx) {
            Coefficient err = (approx.promote(p + 16) - exact.promote(p + 16)).abs();
            Coefficient bound = relative * exact.abs().promote(p + 16) +
                                Coefficient::pow10(-2 * p, Backend::bigfloat, p + 16);
            CHECK(err.cmp(bound) <= 0);
        };
        check_op(x + y, x.promote(p) + y.promote(p));
        check_op(x - y, x.promote(p) - y.promote(p));
        check_op(x * y, x.promote(p) * y.promote(p));
        if (!y.is_zero()) check_op(x / y, x.promote(p) / y.promote(p));
    }
}

TEST_CASE("promotion is value-preserving to 10^(1-p)") {
    std::mt19937 rng(20250805);
    int p = 32;
    for (int i = 0; i < 100; ++i) {
        Coefficient q = volpic_test::random_rational(rng);
        if (q.is_zero()) continue;
        Coefficient hi = q.promote(64);
        Coefficient lo = q.promote(p).promote(64);
        Coefficient err = (hi - lo).abs();
        Coefficient bound =
            Coefficient::pow10(1 - p, Backend::bigfloat, 64) * q.abs().promote(64);
        CHECK(err.cmp(bound) <= 0);
    }
}

TEST_CASE("fixed-point decimals round half away from zero") {
    CHECK(rat(1, 6).decimal(5) == "0.16667");
    CHECK(rat(-1, 30).decimal(5) == "-0.03333");
    CHECK(rat(0).decimal(5) == "0.00000");
    CHECK(rat(17, 315).decimal(5) == "0.05397");
    CHECK(rat(1, 8).decimal(2) == "0.13");
    CHECK(rat(-1, 8).decimal(2) == "-0.13");
    CHECK(rat(5, 2).decimal(0) == "3");
    CHECK(rat(3, 2).promote(40).decimal(5) == "1.50000");
    CHECK((-rat(1, 30).promote(40)).decimal(5) == "-0.03333");
}

TEST_CASE("integer powers, including negative exponents") {
    CHECK(rat(2, 3).pow(3) == rat(8, 27));
    CHECK(rat(2, 3).pow(-2) == rat(9, 4));
    CHECK(rat(7).pow(0) == rat(1));
    CHECK_THROWS_AS(rat(0).pow(-1), std::domain_error);
}

TEST_SUITE_END();
