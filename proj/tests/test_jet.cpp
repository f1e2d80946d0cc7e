#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gfa/expr.hpp"
#include "gfa/jet.hpp"
#include "gfa/rng.hpp"

using namespace gfa;

TEST_CASE("exponential at zero has all derivatives one") {
    Jet j = jet_eval(parse_expr("exp(x)"), 0.0, 3);
    CHECK(j.order() == 3);
    for (int k = 0; k <= 3; ++k) CHECK(j.deriv(k) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("square at two") {
    Jet j = jet_eval(parse_expr("x^2"), 2.0, 2);
    CHECK(j.deriv(0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(j.deriv(1) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(j.deriv(2) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("scaled gaussian kernel at the origin") {
    // even function: value n/sqrt(pi), first derivative zero
    Jet j = jet_eval(parse_expr("n*exp(-(n*x)^2)/sqrt(pi)"), 0.0, 1, 5.0);
    CHECK(j.value() == doctest::Approx(2.8209479177387817).epsilon(1e-15));
    CHECK(j.deriv(1) == doctest::Approx(0.0));
}

TEST_CASE("order above the configured maximum is a capability error") {
    CHECK_NOTHROW(jet_eval(parse_expr("sin(x)"), 0.3, kMaxJetOrder));
    CHECK_THROWS_AS(jet_eval(parse_expr("sin(x)"), 0.3, kMaxJetOrder + 1), CapabilityError);
}

TEST_CASE("domain guards propagate") {
    CHECK_THROWS_AS(jet_eval(parse_expr("log(x)"), -1.0, 2), EvalError);
    CHECK_THROWS_AS(jet_eval(parse_expr("1/x"), 0.0, 1), EvalError);
}

TEST_CASE("product rule agrees with differentiating the product tree") {
    auto f = parse_expr("sin(x)");
    auto g = parse_expr("x^2 + 1");
    double x = 0.7;
    Jet jf = jet_eval(f, x, 4);
    Jet jg = jet_eval(g, x, 4);
    Jet prod = jet_mul(jf, jg);
    Jet direct = jet_eval(Expr::mul(f, g), x, 4);
    for (int k = 0; k <= 4; ++k)
        CHECK(prod.deriv(k) == doctest::Approx(direct.deriv(k)).epsilon(1e-12));
}

TEST_CASE("sums, differences and scalar multiples are componentwise") {
    auto f = parse_expr("cos(x)");
    auto g = parse_expr("x^3");
    double x = -0.4;
    Jet jf = jet_eval(f, x, 3), jg = jet_eval(g, x, 3);
    Jet s = jet_add(jf, jg), d = jet_sub(jf, jg), c = jet_scale(2.5, jf);
    Jet se = jet_eval(Expr::add(f, g), x, 3);
    Jet de = jet_eval(Expr::sub(f, g), x, 3);
    for (int k = 0; k <= 3; ++k) {
        CHECK(s.deriv(k) == doctest::Approx(se.deriv(k)).epsilon(1e-13));
        CHECK(d.deriv(k) == doctest::Approx(de.deriv(k)).epsilon(1e-13));
        CHECK(c.deriv(k) == doctest::Approx(2.5 * jf.deriv(k)).epsilon(1e-15));
    }
}

TEST_CASE("shifting a jet yields the jet of the derivative") {
    auto f = parse_expr("x^3 + sin(x)");
    double x = 1.2;
    Jet j = jet_eval(f, x, 4);
    Jet shifted = jet_shift(j);
    Jet direct = jet_eval(d_dx(f), x, 3);
    CHECK(shifted.order() == 3);
    for (int k = 0; k <= 3; ++k)
        CHECK(shifted.deriv(k) == doctest::Approx(direct.deriv(k)).epsilon(1e-12));
}

TEST_CASE("mixed-order arithmetic truncates to the shorter operand") {
    Jet a = jet_eval(parse_expr("exp(x)"), 0.0, 4);
    Jet b = jet_eval(parse_expr("x"), 0.0, 2);
    CHECK(jet_add(a, b).order() == 2);
    CHECK(jet_mul(a, b).order() == 2);
}

namespace {

// Small random trees over domain-safe operations: no division, no logs, and
// sqrt only of 1 + t^2. Values stay tame for the finite-difference oracle.
ExprPtr random_tree(Rng& rng, int depth) {
    if (depth == 0) {
        return rng.bernoulli(0.5) ? Expr::var_x()
                                  : Expr::constant(rng.uniform(0.5, 2.0));
    }
    switch (rng.uniform_int(0, 6)) {
        case 0: return Expr::add(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 1: return Expr::sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 2: return Expr::mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 3: return Expr::sin(random_tree(rng, depth - 1));
        case 4: return Expr::cos(random_tree(rng, depth - 1));
        case 5:
            return Expr::exp(Expr::mul(Expr::constant(0.3), random_tree(rng, depth - 1)));
        default: {
            ExprPtr t = random_tree(rng, depth - 1);
            return Expr::sqrt(Expr::add(Expr::constant(1.0), Expr::mul(t, t)));
        }
    }
}

long double eval_ld(const ExprPtr& e, double x) {
    EvalEnv env;
    env.x = x;
    return eval<long double>(e, env);
}

}  // namespace

TEST_CASE("first and second jet components match central finite differences") {
    Rng rng(20240817);
    const long double h = 1e-5L;
    int tested = 0;
    while (tested < 100) {
        ExprPtr e = random_tree(rng, rng.uniform_int(1, 3));
        double x = rng.uniform(-1.5, 1.5);
        long double f0 = eval_ld(e, x);
        long double fp = eval_ld(e, x + static_cast<double>(h));
        long double fm = eval_ld(e, x - static_cast<double>(h));
        if (std::fabs(static_cast<double>(f0)) > 1e6) continue;  // resample wild trees
        long double fd1 = (fp - fm) / (2 * h);
        long double fd2 = (fp - 2 * f0 + fm) / (h * h);

        Jet j = jet_eval(e, x, 2);
        double rel1 = std::fabs(j.deriv(1) - static_cast<double>(fd1)) /
                      std::max({1.0, std::fabs(j.deriv(1)), std::fabs(static_cast<double>(fd1))});
        double rel2 = std::fabs(j.deriv(2) - static_cast<double>(fd2)) /
                      std::max({1.0, std::fabs(j.deriv(2)), std::fabs(static_cast<double>(fd2))});
        CHECK_MESSAGE(rel1 <= 1e-6, "d1 off for ", to_string(e), " at x=", x);
        CHECK_MESSAGE(rel2 <= 1e-6, "d2 off for ", to_string(e), " at x=", x);
        ++tested;
    }
}
