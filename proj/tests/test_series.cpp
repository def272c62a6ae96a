#include "doctest.h"
#include "support/properties.hpp"
#include "support/test_util.hpp"
#include "volpic/series.hpp"

using namespace volpic;
using volpic_test::rat;

namespace {

Series make(std::initializer_list<Coefficient> coeffs, Coefficient point = rat(0)) {
    Series s(point, static_cast<int>(coeffs.size()) - 1, Backend::rational, 0);
    int j = 0;
    for (const auto& c : coeffs) s.set(j++, c);
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("series");

TEST_CASE("constant series") {
    Series z = Series::constant(rat(0), rat(0), 3);
    for (int j = 0; j <= 3; ++j) CHECK(z[j] == rat(0));
    Series third = Series::constant(rat(1, 3), rat(0), 2);
    CHECK(third[0] == rat(1, 3));
    CHECK(third[1] == rat(0));
    Series c = Series::constant(transcendental_constant(TransFn::cos, rat(1), 32), rat(0), 1);
    CHECK(c[0].decimal(4) == "0.5403");
    CHECK(c[1].is_zero());
}

TEST_CASE("termwise add and scale") {
    Series a = make({rat(1), rat(2)});
    Series b = make({rat(3), rat(4)});
    Series sum = a + b;
    CHECK(sum[0] == rat(4));
    CHECK(sum[1] == rat(6));
    Series zero = a.scaled(rat(0));
    CHECK(zero[0].is_zero());
    CHECK(zero[1].is_zero());
    Series scaled = make({rat(0), rat(0), rat(1)}).scaled(rat(3, 2));
    CHECK(scaled[2] == rat(3, 2));
}

TEST_CASE("truncated Cauchy product") {
    Series p = make({rat(1), rat(1), rat(0)});   // 1 + u
    Series q = make({rat(1), rat(-1), rat(0)});  // 1 - u
    Series prod = p * q;
    CHECK(prod[0] == rat(1));
    CHECK(prod[1] == rat(0));
    CHECK(prod[2] == rat(-1));

    Series one = Series::constant(rat(1), rat(0), 2);
    CHECK((p * one).identical(p));

    // Square of the degree-5 sine partial sum, checked against the
    // brute-force convolution.
    Series sinp = make({rat(0), rat(1), rat(0), rat(-1, 6), rat(0), rat(1, 120)});
    Series sq = sinp * sinp;
    auto expect = volpic_test::brute_force_product(sinp.coeffs(), sinp.coeffs());
    for (int j = 0; j <= 5; ++j) CHECK(sq[j] == expect[j]);
    CHECK(sq[2] == rat(1));
    CHECK(sq[4] == rat(-1, 3));
    CHECK(sq[5] == rat(0));
}

TEST_CASE("definite integral from the expansion point") {
    Series p = make({rat(1), rat(0), rat(0)});
    Series ip = p.integrated();
    CHECK(ip[0] == rat(0));
    CHECK(ip[1] == rat(1));
    CHECK(ip[2] == rat(0));

    Series q = make({rat(0), rat(0), rat(1), rat(0)});
    Series iq = q.integrated();
    CHECK(iq[3] == rat(1, 3));

    // v <- 1 + integral(v) three times from the constant 1: partial sums of e^t.
    Series v = Series::constant(rat(1), rat(0), 3);
    Series one = Series::constant(rat(1), rat(0), 3);
    for (int k = 0; k < 3; ++k) v = one + v.integrated();
    CHECK(v[0] == rat(1));
    CHECK(v[1] == rat(1));
    CHECK(v[2] == rat(1, 2));
    CHECK(v[3] == rat(1, 6));
}

TEST_CASE("termwise derivative") {
    Series p = make({rat(0), rat(1)});
    Series dp = p.differentiated();
    CHECK(dp[0] == rat(1));
    CHECK(dp[1] == rat(0));

    Series e = make({rat(1), rat(1), rat(1, 2), rat(1, 6)});
    Series de = e.differentiated();
    CHECK(de[0] == rat(1));
    CHECK(de[1] == rat(1));
    CHECK(de[2] == rat(1, 2));
    CHECK(de[3] == rat(0));
}

TEST_CASE("Horner evaluation") {
    CHECK(make({rat(1), rat(2), rat(3)}).evaluate(rat(0)) == rat(1));
    CHECK(make({rat(0), rat(1)}).evaluate(rat(1, 2)) == rat(1, 2));
    // Shifted point: p(u) = u with a = 1 evaluates x - 1.
    Series shifted = make({rat(0), rat(1)}, rat(1));
    CHECK(shifted.evaluate(rat(3, 2)) == rat(1, 2));
}

TEST_CASE("rounded coefficient strings") {
    CHECK(make({rat(1, 6)}).rounded_coeffs(5)[0] == "0.16667");
    CHECK(make({rat(0)}).rounded_coeffs(5)[0] == "0.00000");
    CHECK(make({rat(17, 315)}).rounded_coeffs(5)[0] == "0.05397");
}

TEST_CASE("mismatched operands are rejected") {
    Series a = make({rat(1), rat(2)});
    Series b = make({rat(1), rat(2), rat(3)});
    CHECK_THROWS_AS(a + b, series_mismatch);
    Series c = make({rat(1), rat(2)}, rat(1));
    CHECK_THROWS_AS(a * c, series_mismatch);
    Series f(rat(0), 1, Backend::bigfloat, 40);
    CHECK_THROWS_AS(a + f, series_mismatch);
    CHECK_THROWS_AS(a.scaled(rat(1).promote(40)), series_mismatch);
}

TEST_CASE("product matches brute-force convolution on random series") {
    volpic_test::check_mul_vs_brute_force(200);
}

TEST_CASE("integrate then differentiate is the identity below top degree") {
    volpic_test::check_integrate_differentiate(100);
}

TEST_CASE("evaluation is additive and products commute/associate") {
    std::mt19937 rng(20250806);
    for (int c = 0; c < 50; ++c) {
        Series p = volpic_test::random_series(rng, 12);
        Series q = volpic_test::random_series(rng, 12);
        Series r = volpic_test::random_series(rng, 12);
        Coefficient x = volpic_test::random_rational(rng);
        CHECK((p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x));
        CHECK((p * q).identical(q * p));
        CHECK(((p * q) * r).identical(p * (q * r)));
    }
}

TEST_SUITE_END();
