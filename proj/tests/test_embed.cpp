#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "gfa/embed.hpp"
#include "gfa/errors.hpp"
#include "gfa/quadrature.hpp"

using namespace gfa;

namespace {

const SeminormFamily kSup = SeminormFamily::sup_derivatives();
const SeminormFamily kAbs = SeminormFamily::absolute_value();

double value_at(const Element& e, double x) {
    return std::get<NumericFn>(e).jet_at(x, 0).value();
}

// <f_n, psi> after the substitution u = n x, which keeps the integrand bounded
// by sup|phi| sup|psi| instead of concentrating it on a width-1/n spike.
double pair_delta(const Seq& delta, long n, const std::function<double(double)>& psi,
                  double half_width) {
    double nd = static_cast<double>(n);
    Element el = delta.at(n);
    double cut = std::min(12.0, nd * half_width);
    auto g = [&](double u) { return value_at(el, u / nd) * psi(u / nd) / nd; };
    return integrate(g, -cut, cut, 1e-9);
}

}  // namespace

TEST_CASE("bundled mollifiers integrate to one") {
    CHECK(check_normalized(Mollifier::gaussian()));
    CHECK(check_normalized(Mollifier::bump()));
    // truncating the gaussian support cuts the mass to erf(1/2)
    Mollifier cut = Mollifier::gaussian();
    cut.support_radius = 0.5;
    CHECK_FALSE(check_normalized(cut));
}

TEST_CASE("scalar embedding has unit ultranorm, zero maps to the ideal") {
    Seq five = embed_constant(Element(Scalar(5.0, 0.0)));
    auto est = ultranorm(five, kAbs, 1, 0, Scale::log());
    CHECK(est.value == 1.0);
    CHECK(est.method == FitMethod::ClosedForm);
    CHECK(classify(five, kAbs, Scale::log(), QuantMode::Projective).verdict ==
          Verdict::Moderate);

    Seq zero = embed_constant(Element(Scalar(0.0, 0.0)));
    CHECK(classify(zero, kAbs, Scale::log(), QuantMode::Projective).verdict ==
          Verdict::Negligible);
}

TEST_CASE("smooth constant embedding is recognized as stationary") {
    Seq f = embed_constant(Element(SmoothElement{parse_expr("sin(x)"), std::nullopt}));
    auto est = ultranorm(f, kSup, 1, 0, Scale::log());
    CHECK(est.value == 1.0);  // exact: p(f_n) is literally constant in n
    CHECK(classify(f, kSup, Scale::log(), QuantMode::Projective,
                   IndexBudget{2, 1}).verdict == Verdict::Moderate);
}

TEST_CASE("delta sequence values and certificate") {
    Seq delta = make_delta(Mollifier::gaussian());
    // sup |delta_10| on [-1, 1] is attained at 0: 10 phi(0) = 10/sqrt(pi)
    CHECK(seminorm_eval(kSup, 1, 0, delta.at(10)) ==
          doctest::Approx(5.6418958354775635).epsilon(1e-12));

    auto c0 = delta.certificate()->at(1, 0);
    REQUIRE(c0.has_value());
    CHECK(c0->C == doctest::Approx(0.5641895835477563).epsilon(1e-6));
    CHECK(c0->a == 1);
    auto c1 = delta.certificate()->at(1, 1);
    REQUIRE(c1.has_value());
    CHECK(c1->C == doctest::Approx(0.4839414490382868).epsilon(1e-6));
    CHECK(c1->a == 2);

    auto est = ultranorm(delta, kSup, 1, 0, Scale::log());
    CHECK(est.method == FitMethod::ClosedForm);
    CHECK(est.value == doctest::Approx(2.718281828459045).epsilon(1e-12));
}

TEST_CASE("bump delta caps its certificate at the profile smoothness") {
    Seq delta = make_delta(Mollifier::bump());
    auto c0 = delta.certificate()->at(1, 0);
    REQUIRE(c0.has_value());
    CHECK(c0->C == doctest::Approx(1.23046875).epsilon(1e-6));
    CHECK(delta.certificate()->at(1, 3).has_value());
    CHECK_FALSE(delta.certificate()->at(1, 4).has_value());
    CHECK(seminorm_eval(kSup, 1, 0, delta.at(10)) ==
          doctest::Approx(12.3046875).epsilon(1e-9));
}

TEST_CASE("delta squared is moderate with ultranorm e^2 and is not zero") {
    Seq delta = make_delta(Mollifier::gaussian());
    Seq sq = seq_mul(delta, delta);
    auto est = ultranorm(sq, kSup, 1, 0, Scale::log());
    CHECK(est.value == doctest::Approx(7.38905609893065).epsilon(1e-12));
    CHECK(classify(sq, kSup, Scale::log(), QuantMode::Projective,
                   IndexBudget{1, 0}).verdict == Verdict::Moderate);
    CHECK(equal_in_quotient(sq, Seq::zero(), kSup, Scale::log(), QuantMode::Projective,
                            IndexBudget{1, 0}) == TriVerdict::NotEqual);
}

TEST_CASE("differentiating the delta shifts its growth exponent") {
    Seq delta = make_delta(Mollifier::gaussian());
    Seq ddelta = seq_derivative(delta);
    auto est = ultranorm(ddelta, kSup, 1, 0, Scale::log());
    CHECK(est.method == FitMethod::ClosedForm);
    CHECK(est.value == doctest::Approx(7.38905609893065).epsilon(1e-12));
    // the element really is the x-derivative
    double direct = std::get<NumericFn>(delta.at(5)).jet_at(0.1, 1).deriv(1);
    CHECK(value_at(ddelta.at(5), 0.1) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("sampled suprema outgrow every fixed bound") {
    Seq delta = make_delta(Mollifier::gaussian());
    EvalBudget budget;
    budget.n_max = 1000;
    auto rep = check_unbounded(delta, kSup, 1, budget);
    // the geometric schedule drops rounding duplicates at this short range
    CHECK(rep.sup_values.size() >= 12);
    CHECK(rep.sup_values.size() <= 24);
    CHECK(rep.monotone_growth);
    CHECK(rep.exceeds == doctest::Approx(564.1895835477563).epsilon(1e-9));

    auto flat = check_unbounded(Seq::constant(Scalar(3.0, 0.0)), kAbs, 1, budget);
    CHECK_FALSE(flat.monotone_growth);
}

TEST_CASE("any bound read off finitely many samples is eventually beaten") {
    Seq delta = make_delta(Mollifier::gaussian());
    EvalBudget budget;
    budget.n_max = 1000;
    double C = check_unbounded(delta, kSup, 1, budget).exceeds;

    // triangle test function of height C+1 concentrated on width 1/(C+2)
    double H = C + 1.0, w = 1.0 / (C + 2.0);
    auto psi = [H, w](double x) {
        double t = 1.0 - std::fabs(x) / w;
        return t > 0 ? H * t : 0.0;
    };
    for (long n : {10L, 100L, 1000L})
        CHECK(pair_delta(delta, n, psi, w) <= C);
    CHECK(pair_delta(delta, 4'096'000L, psi, w) > C + 0.5);
}

TEST_CASE("delta pairings converge to the point value") {
    Seq delta = make_delta(Mollifier::gaussian());
    auto psi = [](double x) { return 1.0 - x * x; };
    double e10 = std::fabs(pair_delta(delta, 10, psi, 12.0) - 1.0);
    double e100 = std::fabs(pair_delta(delta, 100, psi, 12.0) - 1.0);
    double e1000 = std::fabs(pair_delta(delta, 1000, psi, 12.0) - 1.0);
    CHECK(e10 == doctest::Approx(0.005).epsilon(0.05));
    CHECK(e100 < e10);
    CHECK(e1000 < e100);
    CHECK(e1000 < 1e-3);
}

TEST_CASE("log scale is admissible for the delta, slower scales are not") {
    Seq delta = make_delta(Mollifier::gaussian());
    auto good = check_scale_admissible(delta, kSup, Scale::log(), QuantMode::Projective,
                                       IndexBudget{2, 1});
    CHECK(good.admissible);
    REQUIRE(good.nonzero_witness.has_value());
    for (const auto& w : good.a_table)
        CHECK(w.estimate.value == doctest::Approx(std::exp(w.nu + 1.0)).epsilon(1e-2));

    Scale slow = Scale::custom("1/log(log(n))", 16);
    auto bad = check_scale_admissible(delta, kSup, slow, QuantMode::Projective,
                                      IndexBudget{2, 1});
    CHECK_FALSE(bad.admissible);

    auto zero = check_scale_admissible(Seq::zero(), kAbs, Scale::log(),
                                       QuantMode::Projective);
    CHECK_FALSE(zero.admissible);
    CHECK_FALSE(zero.nonzero_witness.has_value());
}

TEST_CASE("convolution embedding reproduces smooth functions") {
    Mollifier m = Mollifier::gaussian();
    Seq one = embed_by_convolution(Element(SmoothElement{parse_expr("1"), std::nullopt}), m);
    CHECK(value_at(one.at(7), 0.3) == doctest::Approx(1.0).epsilon(1e-8));

    Seq lin = embed_by_convolution(Element(SmoothElement{parse_expr("x"), std::nullopt}), m);
    for (double x : {-1.0, 0.0, 1.0})
        CHECK(value_at(lin.at(7), x) == doctest::Approx(x).epsilon(1e-6));
    CHECK(std::get<NumericFn>(lin.at(7)).jet_at(0.5, 1).deriv(1) ==
          doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(embed_by_convolution(Element(Scalar(1.0, 0.0)), m), TypeError);
}

TEST_CASE("heaviside embedding is bounded and value-only") {
    Seq h = embed_heaviside(Mollifier::gaussian());
    CHECK(seminorm_eval(kSup, 1, 0, h.at(50)) <= 1.0 + 1e-6);
    auto est = ultranorm(h, kSup, 1, 0, Scale::log());
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-2));
    CHECK_THROWS_AS(seminorm_eval(kSup, 1, 1, h.at(8)), CapabilityError);
}
