#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gfa/family.hpp"
#include "gfa/rng.hpp"

using namespace gfa;

namespace {

const SeminormFamily kAbs = SeminormFamily::absolute_value();

Seq certified_expr(const std::string& src, CertParams p) {
    return Seq::from_expr(src).with_certificate(GrowthCertificate::uniform(p));
}

// realizes the certificate as a literal sequence C n^a exp(s n^t); printing
// with max precision keeps the expression and the certificate in exact
// agreement, so the estimator's honesty gate always accepts it
Seq realized(const CertParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << p.C << " * n^" << p.a << " * exp(" << p.s << "*n^" << p.t << ")";
    return certified_expr(os.str(), p);
}

Verdict level_verdict(const FamilyVerdict& v, int m) {
    for (const auto& lv : v.levels)
        if (lv.m == m) return lv.verdict;
    return Verdict::Inconclusive;
}

bool in_F_level(Verdict v) { return v == Verdict::Moderate || v == Verdict::Negligible; }

}  // namespace

TEST_CASE("tri-state names") {
    CHECK(std::string(to_string(TriState::Yes)) == "yes");
    CHECK(std::string(to_string(TriState::No)) == "no");
    CHECK(std::string(to_string(TriState::Unknown)) == "unknown");
}

TEST_CASE("sub-exponential hump clears every power level") {
    Seq hump = Seq::from_expr("exp(log(n)^2)");
    auto v = family_membership(hump, ScaleFamily::power(6), kAbs,
                               QuantMode::Projective, 1, 0);
    CHECK(v.direction == FamilyDirection::IncreasingInM);
    CHECK(v.in_F == TriState::Yes);
    CHECK(v.in_K == TriState::No);
    CHECK_FALSE(v.f_level.has_value());
    CHECK(v.levels.size() == 6);
    CHECK(v.detail.find("no falsifier found up to m=6") != std::string::npos);
}

TEST_CASE("root-exponential growth falls out of the power chain at m=3") {
    Seq surge = certified_expr("exp(sqrt(n))", CertParams{1, 0, 0, 1, 0.5});
    auto v = family_membership(surge, ScaleFamily::power(6), kAbs,
                               QuantMode::Projective, 1, 0);
    CHECK(v.in_F == TriState::No);
    REQUIRE(v.f_level.has_value());
    CHECK(*v.f_level == 3);  // t = 1/2 exceeds 1/m exactly from m = 3
    CHECK(level_verdict(v, 1) == Verdict::Moderate);
    CHECK(level_verdict(v, 2) == Verdict::Moderate);
    CHECK(level_verdict(v, 3) == Verdict::Divergent);
    // boundary level m = 2: the weight matches the growth, ultranorm e^s
    auto est = ultranorm(surge, kAbs, 1, 0, ScaleFamily::power(6).at(2));
    CHECK(est.value == doctest::Approx(2.718281828459045).epsilon(1e-12));
}

TEST_CASE("decay without a vanishing tail stays outside the stationary ideal") {
    auto v = family_membership(Seq::from_expr("1/n"), ScaleFamily::egorov(8), kAbs,
                               QuantMode::Projective, 1, 0, 8);
    CHECK(v.in_F == TriState::Yes);
    CHECK(v.in_K == TriState::No);
}

TEST_CASE("eventually-zero sequences enter the stationary ideal at their cutoff") {
    Seq cut([](long n) {
        if (n == 1) return Element(Scalar(1.0, 0.0));
        if (n == 2) return Element(Scalar(0.5, 0.0));
        return Element(Scalar(0.0, 0.0));
    }, 1, "cut");
    auto v = family_membership(cut, ScaleFamily::egorov(6), kAbs,
                               QuantMode::Projective, 1, 0, 6);
    CHECK(v.in_F == TriState::Yes);
    CHECK(v.in_K == TriState::Yes);
    REQUIRE(v.k_level.has_value());
    CHECK(*v.k_level == 2);  // first level whose tail n > 2 is all zero
    CHECK(level_verdict(v, 0) == Verdict::Moderate);
    CHECK(level_verdict(v, 1) == Verdict::Moderate);
    CHECK(level_verdict(v, 2) == Verdict::Negligible);
}

TEST_CASE("polynomials of any order clear every stationary level") {
    auto v = family_membership(Seq::from_expr("n^10"), ScaleFamily::egorov(6), kAbs,
                               QuantMode::Projective, 1, 0, 6);
    CHECK(v.in_F == TriState::Yes);
    CHECK(v.in_K == TriState::No);
}

TEST_CASE("ideal absorption at the common level, increasing chain") {
    Seq k = certified_expr("exp(-n)", CertParams{1, 0, 0, -1, 1});
    Seq f = certified_expr("n^3", CertParams{1, 3, 0, 0, 0});
    auto rep = family_ideal_check(k, f, ScaleFamily::power(6), kAbs,
                                  QuantMode::Projective, 1, 0);
    CHECK(rep.pairing_ok);
    CHECK_FALSE(rep.vacuous);
    CHECK(rep.passed());
    REQUIRE(rep.product_level.has_value());
    CHECK(*rep.product_level == 2);  // k's witness level serves the product
    REQUIRE(rep.compared_levels.size() == 1);
    CHECK(rep.compared_levels[0] == std::pair<int, int>(2, 2));
    CHECK(rep.detail.find("common level m=2") != std::string::npos);
}

TEST_CASE("ideal absorption for the stationary chain") {
    Seq k([](long n) {
        return Element(Scalar(n <= 2 ? 1.0 / static_cast<double>(n) : 0.0, 0.0));
    }, 1, "cut");
    auto rep = family_ideal_check(k, Seq::from_expr("1/n"), ScaleFamily::egorov(6), kAbs,
                                  QuantMode::Projective, 1, 0, 6);
    CHECK(rep.pairing_ok);
    CHECK(rep.passed());
}

TEST_CASE("ideal check reports vacuous pairing but still classifies the product") {
    Seq k = certified_expr("exp(-n)", CertParams{1, 0, 0, -1, 1});
    Seq f = certified_expr("exp(n/2)", CertParams{1, 0, 0, 0.5, 1});
    auto rep = family_ideal_check(k, f, ScaleFamily::power(6), kAbs,
                                  QuantMode::Projective, 1, 0);
    CHECK_FALSE(rep.pairing_ok);
    CHECK(rep.vacuous);
    // the product exp(-n/2) is still absorbed: decay wins at every level m >= 2
    CHECK(rep.product_in_K == TriState::Yes);
    CHECK(rep.detail.find("pairing not established") != std::string::npos);
}

TEST_CASE("power levels are nested: F shrinks upward, K grows upward") {
    Rng rng(20240823);
    for (int trial = 0; trial < 50; ++trial) {
        CertParams p;
        p.C = rng.uniform(0.5, 2.0);
        p.a = rng.uniform(-2.0, 2.0);
        p.s = rng.uniform(-1.5, 1.5);
        p.t = (trial % 3 == 0) ? 0.3 : (trial % 3 == 1) ? 0.5 : 0.8;
        auto v = family_membership(realized(p), ScaleFamily::power(6), kAbs,
                                   QuantMode::Projective, 1, 0);
        REQUIRE(v.levels.size() == 6);
        for (std::size_t i = 0; i + 1 < v.levels.size(); ++i) {
            Verdict lo = v.levels[i].verdict, hi = v.levels[i + 1].verdict;
            CHECK(lo != Verdict::Inconclusive);
            if (in_F_level(hi)) CHECK_MESSAGE(in_F_level(lo), "trial ", trial, " m=", i + 1);
            if (lo == Verdict::Negligible)
                CHECK_MESSAGE(hi == Verdict::Negligible, "trial ", trial, " m=", i + 1);
        }
    }
}

TEST_CASE("asymptotic-derived and hand-built custom families agree") {
    auto fam_a = ScaleFamily::from_asymptotic(AsymptoticFamily::from_expr("n^(-m)"), 1, 4);
    std::vector<Scale> hand;
    for (int m = 1; m <= 4; ++m) {
        std::ostringstream os;
        os << "1/(" << m << "*log(n))";
        hand.push_back(Scale::custom(os.str(), 2));
    }
    auto fam_b = ScaleFamily::from_scales(std::move(hand), 1);

    Seq f = Seq::from_expr("n^2");
    auto va = family_membership(f, fam_a, kAbs, QuantMode::Projective, 1, 0, 4);
    auto vb = family_membership(f, fam_b, kAbs, QuantMode::Projective, 1, 0, 4);
    CHECK(va.direction == FamilyDirection::DecreasingInM);
    CHECK(vb.direction == va.direction);
    CHECK(va.in_F == vb.in_F);
    CHECK(va.in_K == vb.in_K);
    CHECK(va.f_level == vb.f_level);
    CHECK(va.k_level == vb.k_level);
    REQUIRE(va.levels.size() == vb.levels.size());
    for (std::size_t i = 0; i < va.levels.size(); ++i)
        CHECK(va.levels[i].verdict == vb.levels[i].verdict);
    // the union side of a decreasing family admits n^2 at its first level
    CHECK(va.in_F == TriState::Yes);
    REQUIRE(va.f_level.has_value());
    CHECK(*va.f_level == 1);
}
