#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <utility>

#include "doctest.h"
#include "gfa/seminorm.hpp"

using namespace gfa;

namespace {

SmoothElement smooth(const char* src) { return SmoothElement{parse_expr(src), std::nullopt}; }

SmoothElement smooth_n(const char* src, long n) { return SmoothElement{parse_expr(src), n}; }

}  // namespace

TEST_CASE("absolute value of a complex scalar") {
    SeminormFamily p = SeminormFamily::absolute_value();
    CHECK(seminorm_eval(p, 0, 0, Scalar(-3.0, 4.0)) == 5.0);
    CHECK(seminorm_eval(p, 3, 7, Scalar(-3.0, 4.0)) == 5.0);  // indices ignored
    CHECK(p.indices_ignored());
    CHECK_THROWS_AS(seminorm_eval(p, 0, 0, smooth("x")), TypeError);
}

TEST_CASE("sup of derivatives on the square") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    // max(sup |x^2|, sup |2x|) on [-2,2] = 4, attained at the endpoints
    CHECK(seminorm_eval(p, 2, 1, smooth("x^2")) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(seminorm_eval(p, 1, 0, smooth("x^2")) == doctest::Approx(1.0).epsilon(1e-12));
    // adding the second derivative does not change the max here (|2| < 4)
    CHECK(seminorm_eval(p, 2, 2, smooth("x^2")) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("sup of sin on the unit interval") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    CHECK(seminorm_eval(p, 1, 0, smooth("sin(x)")) ==
          doctest::Approx(0.8414709848078965).epsilon(1e-12));
    // order 1 adds cos with sup cos = cos 0 = 1
    CHECK(seminorm_eval(p, 1, 1, smooth("sin(x)")) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constants have index-independent seminorms") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    for (int mu = 1; mu <= 3; ++mu)
        for (int nu = 0; nu <= 2; ++nu)
            CHECK(seminorm_eval(p, mu, nu, smooth("7")) == doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("scalars pass through the sup seminorm by modulus") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    CHECK(seminorm_eval(p, 2, 2, Element(Scalar(-3.0, 4.0))) == 5.0);
}

TEST_CASE("index monotonicity") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    std::array<std::pair<IndexPair, IndexPair>, 3> pairs = {
        std::pair<IndexPair, IndexPair>{{1, 0}, {2, 0}},
        std::pair<IndexPair, IndexPair>{{1, 0}, {1, 1}},
        std::pair<IndexPair, IndexPair>{{2, 1}, {3, 2}},
    };
    CHECK(check_seminorm_monotone(p, smooth("x^2"), pairs));
    CHECK(check_seminorm_monotone(p, smooth("sin(x)"), pairs));
    CHECK(check_seminorm_monotone(p, smooth("exp(x)*cos(3*x)"), pairs));

    std::array<std::pair<IndexPair, IndexPair>, 1> bad = {
        std::pair<IndexPair, IndexPair>{{2, 0}, {1, 0}},
    };
    CHECK_THROWS_AS(check_seminorm_monotone(p, smooth("x"), bad), TypeError);
}

TEST_CASE("raw grid maxima are monotone under grid doubling") {
    auto jf = [](double x, int order) {
        return jet_eval(parse_expr("sin(5*x)*exp(-x^2)"), x, order);
    };
    for (double density : {64.0, 128.0, 256.0}) {
        double coarse = detail::sup_abs_derivatives(jf, 2.0, 1, density, false);
        double fine = detail::sup_abs_derivatives(jf, 2.0, 1, 2 * density, false);
        CHECK(fine >= coarse);
    }
}

TEST_CASE("narrow spikes near the origin are still seen") {
    // n exp(-(n x)^2) peaks at 0 with width 1/n, far below the uniform grid
    SeminormFamily p = SeminormFamily::sup_derivatives();
    double v = seminorm_eval(p, 1, 0, smooth_n("n*exp(-(n*x)^2)", 100000));
    CHECK(v == doctest::Approx(100000.0).epsilon(1e-9));
}

TEST_CASE("seminorm axioms on sampled elements") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    Element f = smooth("sin(x)"), g = smooth("x^2 - 1");
    double pf = seminorm_eval(p, 2, 1, f), pg = seminorm_eval(p, 2, 1, g);

    double psum = seminorm_eval(p, 2, 1, element_add(f, g));
    CHECK(psum <= pf + pg + 1e-9);

    double pscaled = seminorm_eval(p, 2, 1, element_scalar_mul(Scalar(-2.5, 0.0), f));
    CHECK(pscaled == doctest::Approx(2.5 * pf).epsilon(1e-9));

    // order-0 submultiplicativity on a common ball
    double pf0 = seminorm_eval(p, 2, 0, f), pg0 = seminorm_eval(p, 2, 0, g);
    double pprod0 = seminorm_eval(p, 2, 0, element_mul(f, g));
    CHECK(pprod0 <= pf0 * pg0 + 1e-9);
}

TEST_CASE("incompatible operands raise TypeError") {
    CHECK_THROWS_AS(element_add(smooth_n("n*x", 3), smooth_n("n*x", 4)), TypeError);
    CHECK_THROWS_AS(element_scalar_mul(Scalar(0.0, 1.0), smooth("x")), TypeError);
    CHECK_THROWS_AS(element_derivative(Element(Scalar(1.0, 0.0))), TypeError);
}

TEST_CASE("scalars lift to constants when mixed with smooth elements") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    Element sum = element_add(Element(Scalar(1.0, 0.0)), smooth("x"));
    // 1 + x on [-2, 2]: sup value 3, sup derivative 1
    CHECK(seminorm_eval(p, 2, 1, sum) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(element_is_smooth(sum));
    CHECK_FALSE(element_is_smooth(Element(Scalar(2.0, 0.0))));
}

TEST_CASE("numeric elements cap their derivative order") {
    auto jf = [](double x, int order) { return jet_eval(parse_expr("sin(x)"), x, order); };
    NumericFn capped(jf, 1, "table");
    SeminormFamily p = SeminormFamily::sup_derivatives();
    CHECK(seminorm_eval(p, 1, 1, Element(capped)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(seminorm_eval(p, 1, 2, Element(capped)), CapabilityError);

    NumericFn opaque(jf, -1, "no-derivatives");
    CHECK_THROWS_AS(seminorm_eval(p, 1, 0, Element(opaque)), CapabilityError);
}

TEST_CASE("derivatives of numeric elements shift the order budget") {
    auto jf = [](double x, int order) { return jet_eval(parse_expr("x^3"), x, order); };
    NumericFn cubic(jf, 4, "cubic");
    Element d = element_derivative(Element(cubic));
    SeminormFamily p = SeminormFamily::sup_derivatives();
    // d/dx x^3 = 3x^2: sup on [-1,1] is 3
    CHECK(seminorm_eval(p, 1, 0, d) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::get<NumericFn>(d).max_order() == 3);
}

TEST_CASE("fixed-order sobolev variant ignores the indices") {
    SeminormFamily p = SeminormFamily::sobolev(1, 1.0);
    CHECK(p.indices_ignored());
    // max(sup |x^2| on [-1,1], sup |2x|) = 2
    CHECK(seminorm_eval(p, 1, 0, smooth("x^2")) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(seminorm_eval(p, 5, 9, smooth("x^2")) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("negative indices are rejected") {
    SeminormFamily p = SeminormFamily::sup_derivatives();
    CHECK_THROWS_AS(seminorm_eval(p, -1, 0, smooth("x")), TypeError);
    CHECK_THROWS_AS(seminorm_eval(p, 0, -1, smooth("x")), TypeError);
}
