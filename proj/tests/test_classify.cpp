#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>

#include "doctest.h"
#include "gfa/classify.hpp"
#include "gfa/embed.hpp"

using namespace gfa;

namespace {

const SeminormFamily kAbs = SeminormFamily::absolute_value();
const SeminormFamily kSup = SeminormFamily::sup_derivatives();

Seq certified(const char* src, CertParams p) {
    return Seq::from_expr(src).with_certificate(GrowthCertificate::uniform(p));
}

}  // namespace

TEST_CASE("verdict and mode names") {
    CHECK(std::strcmp(to_string(Verdict::Moderate), "moderate") == 0);
    CHECK(std::strcmp(to_string(Verdict::Negligible), "negligible") == 0);
    CHECK(std::strcmp(to_string(Verdict::Divergent), "divergent") == 0);
    CHECK(std::strcmp(to_string(Verdict::Inconclusive), "inconclusive") == 0);
    CHECK(std::strcmp(to_string(QuantMode::Projective), "projective") == 0);
    CHECK(std::strcmp(to_string(QuantMode::Inductive), "inductive") == 0);
    CHECK(std::strcmp(to_string(TriVerdict::Equal), "equal") == 0);
    CHECK(std::strcmp(to_string(TriVerdict::NotEqual), "not-equal") == 0);
}

TEST_CASE("polynomial growth is moderate") {
    auto c = classify(Seq::from_expr("n^2"), kAbs, Scale::log(), QuantMode::Projective);
    CHECK(c.verdict == Verdict::Moderate);
    // scalar seminorms ignore the indices, so one witness suffices
    REQUIRE(c.witnesses.size() == 1);
    CHECK(c.witnesses[0].estimate.value == doctest::Approx(7.3890560989306495).epsilon(1e-6));
}

TEST_CASE("zero is negligible and all witnesses vanish") {
    auto c = classify(Seq::zero(), kAbs, Scale::log(), QuantMode::Projective);
    CHECK(c.verdict == Verdict::Negligible);
    for (const auto& w : c.witnesses) CHECK(w.estimate.value == 0.0);
}

TEST_CASE("root-exponential growth diverges under the log weight") {
    auto c = classify(Seq::from_expr("exp(sqrt(n))"), kAbs, Scale::log(),
                      QuantMode::Projective);
    CHECK(c.verdict == Verdict::Divergent);
    bool some_infinite = false;
    for (const auto& w : c.witnesses)
        if (std::isinf(w.estimate.value)) some_infinite = true;
    CHECK(some_infinite);
}

TEST_CASE("oscillating growth is inconclusive, not guessed") {
    auto c = classify(Seq::from_expr("exp(sin(5*n)*log(n))"), kAbs, Scale::log(),
                      QuantMode::Projective);
    CHECK(c.verdict == Verdict::Inconclusive);
}

TEST_CASE("delta sequence is moderate with escalating witness values") {
    Seq delta = make_delta(Mollifier::gaussian());
    auto c = classify(delta, kSup, Scale::log(), QuantMode::Projective,
                      IndexBudget{2, 1});
    CHECK(c.verdict == Verdict::Moderate);
    for (const auto& w : c.witnesses) {
        double expect = std::exp(w.nu + 1.0);
        CHECK_MESSAGE(w.estimate.value == doctest::Approx(expect).epsilon(1e-2),
                      "witness (", w.mu, ",", w.nu, ")");
    }
}

TEST_CASE("quantifier modes can disagree") {
    // sup |f_n| stays near 1 while sup |f_n'| grows like exp(sqrt(n)): every
    // mu has the nu = 0 witness, but the (mu, 1) estimates blow up
    Seq f = Seq::from_expr("sin(exp(sqrt(n))*x)");
    EvalBudget small;
    small.n_max = 200'000;  // keep exp(sqrt(n)) inside double range
    auto proj = classify(f, kSup, Scale::log(), QuantMode::Projective,
                         IndexBudget{2, 1}, small);
    CHECK(proj.verdict == Verdict::Divergent);
    auto ind = classify(f, kSup, Scale::log(), QuantMode::Inductive,
                        IndexBudget{2, 1}, small);
    CHECK(ind.verdict == Verdict::Moderate);
}

TEST_CASE("inductive negligibility needs a zero witness per ball radius") {
    auto ind = classify(Seq::zero(), kAbs, Scale::log(), QuantMode::Inductive);
    CHECK(ind.verdict == Verdict::Negligible);
    auto mod = classify(certified("n", CertParams{1, 1, 0, 0, 0}), kAbs, Scale::log(),
                        QuantMode::Inductive);
    CHECK(mod.verdict == Verdict::Moderate);
}

TEST_CASE("distance of a sequence to itself is zero") {
    Seq f = Seq::from_expr("n^2 + 1");
    auto est = distance(f, f, kAbs, 1, 0, Scale::log());
    CHECK(est.value == 0.0);
}

TEST_CASE("distance of distinct constants is exactly one") {
    Seq one = Seq::constant(Scalar(1.0, 0.0));
    Seq zero = Seq::zero();
    auto est = distance(one, zero, kAbs, 1, 0, Scale::log());
    CHECK(est.value == 1.0);
    // symmetric by construction
    CHECK(distance(zero, one, kAbs, 1, 0, Scale::log()).value == 1.0);
}

TEST_CASE("distance between polynomial orders reflects the dominant term") {
    auto est = distance(Seq::from_expr("n"), Seq::from_expr("n^2"), kAbs, 1, 0, Scale::log());
    CHECK(est.value == doctest::Approx(7.3890560989306495).epsilon(1e-2));
}

TEST_CASE("an exponentially small perturbation is equal in the quotient") {
    Seq f = Seq::constant(Scalar(1.5, 0.0));
    Seq g = Seq::from_expr("1.5 + exp(-n)");
    CHECK(equal_in_quotient(f, g, kAbs, Scale::log(), QuantMode::Projective) ==
          TriVerdict::Equal);
}

TEST_CASE("distinct constants are not equal in the quotient") {
    Seq f = Seq::constant(Scalar(1.0, 0.0));
    Seq g = Seq::constant(Scalar(2.0, 0.0));
    CHECK(equal_in_quotient(f, g, kAbs, Scale::log(), QuantMode::Projective) ==
          TriVerdict::NotEqual);
}

TEST_CASE("harmonic decay is visibly different from zero") {
    CHECK(equal_in_quotient(Seq::from_expr("1/n"), Seq::zero(), kAbs, Scale::log(),
                            QuantMode::Projective) == TriVerdict::NotEqual);
}

TEST_CASE("equality is inconclusive when an operand is not moderate") {
    CHECK(equal_in_quotient(Seq::from_expr("exp(n)"), Seq::zero(), kAbs, Scale::log(),
                            QuantMode::Projective) == TriVerdict::Inconclusive);
}

TEST_CASE("rounding noise between identical representatives reads as equal") {
    // the same sum evaluated in two associativity orders differs by ulps only
    Seq a([](long n) {
        double v = 0;
        for (int k = 1; k <= 6; ++k) v += 1.0 / std::pow(static_cast<double>(n), k);
        return Element(Scalar(v, 0.0));
    }, 1, "lr");
    Seq b([](long n) {
        double v = 0;
        for (int k = 6; k >= 1; --k) v += 1.0 / std::pow(static_cast<double>(n), k);
        return Element(Scalar(v, 0.0));
    }, 1, "rl");
    CHECK(equal_in_quotient(a, b, kAbs, Scale::log(), QuantMode::Projective) ==
          TriVerdict::Equal);
}
