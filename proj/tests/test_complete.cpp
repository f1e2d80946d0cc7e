#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gfa/complete.hpp"

using namespace gfa;

namespace {

const SeminormFamily kAbs = SeminormFamily::absolute_value();

// partial sums of the geometric series in 1/n; left-to-right accumulation so
// that terms below one ulp of the head are absorbed, exactly as a user-written
// expression "1 + 1/n + ..." would behave
Seq geometric_member(int m) {
    return Seq([m](long n) {
        double s = 0;
        for (int j = 0; j <= m; ++j) s += std::pow(static_cast<double>(n), -j);
        return Element(Scalar(s, 0.0));
    }, 1, "g" + std::to_string(m));
}

std::vector<Seq> geometric_members(int count) {
    std::vector<Seq> out;
    for (int m = 0; m < count; ++m) out.push_back(geometric_member(m));
    return out;
}

}  // namespace

TEST_CASE("modulus extraction on the geometric family") {
    EvalBudget budget;
    budget.n_max = 100'000;
    CauchyData cd = extract_moduli(geometric_members(8), kAbs, Scale::log(), 4, budget);

    // d(f^k, f^l) = e^{-(k+1)}, so each level advances the member index by one
    // and the list supports seven levels before m <= M-2 runs out
    REQUIRE(cd.m_mu.size() == 7);
    REQUIRE(cd.n_mu.size() == 7);
    for (std::size_t i = 0; i < cd.m_mu.size(); ++i)
        CHECK(cd.m_mu[i] == static_cast<int>(i));
    for (std::size_t i = 1; i < cd.n_mu.size(); ++i)
        CHECK(cd.n_mu[i] > cd.n_mu[i - 1]);
    CHECK(cd.n_mu[0] == 2);
    CHECK(cd.nu_mu[0] == 1);  // default order map nu = mu
    CHECK(cd.nu_mu[3] == 4);

    SUBCASE("the defining inequality holds on the sampled grid") {
        const int M = static_cast<int>(cd.members.size());
        for (int mu = 1; mu <= static_cast<int>(cd.m_mu.size()); ++mu) {
            double eps = std::ldexp(1.0, -mu);
            int lo = cd.m_mu[mu - 1];
            int hi = mu < static_cast<int>(cd.m_mu.size()) ? cd.m_mu[mu] : M - 1;
            for (long n : cd.grid) {
                if (n < cd.n_mu[mu - 1]) continue;
                double rn = Scale::log()(n);
                for (int k = lo; k <= hi; ++k)
                    for (int l = k + 1; l <= hi; ++l) {
                        double v = seminorm_eval(kAbs, mu, cd.nu_mu[mu - 1],
                                                 element_sub(cd.members[k].at(n),
                                                             cd.members[l].at(n)));
                        double powed = v == 0.0 ? 0.0 : std::pow(v, rn);
                        CHECK_MESSAGE(powed < eps, "mu=", mu, " n=", n, " (", k, ",", l, ")");
                    }
            }
        }
    }

    SUBCASE("brackets tile the index range") {
        CHECK(cd.bracket(cd.n_mu[0]) == 1);
        CHECK(cd.bracket(cd.n_mu[3]) == 4);
        CHECK(cd.bracket(cd.n_mu[3] + 1) == 4);
        CHECK(cd.bracket(1'000'000) == static_cast<int>(cd.n_mu.size()));
        CHECK(cd.member_for(1'000'000) == cd.m_mu.back());
        CHECK_THROWS_AS(cd.bracket(cd.n_mu[0] - 1), EvalError);
    }

    SUBCASE("diagonal sequence follows the bracket member") {
        Seq fbar = diagonalize(cd);
        CHECK(fbar.domain_start() == cd.n_mu[0]);
        for (long n : {2L, 10L, 100L, 5000L}) {
            Scalar expect = std::get<Scalar>(cd.members[cd.member_for(n)].at(n));
            CHECK(std::get<Scalar>(fbar.at(n)) == expect);
        }
    }

    SUBCASE("members converge to the diagonal") {
        Seq fbar = diagonalize(cd);
        auto rep = verify_convergence(cd, fbar, kAbs, Scale::log(), 4, budget);
        REQUIRE(rep.distances.size() == 8);
        CHECK(rep.distances[0] == doctest::Approx(0.36787944117144233).epsilon(2e-2));
        CHECK(rep.distances[1] == doctest::Approx(0.1353352832366127).epsilon(2e-2));
        // the late differences sit below one ulp of the common head 1 + 1/n,
        // so the sampled values vanish identically
        CHECK(rep.distances.back() == 0.0);
        CHECK(rep.final_bound == 0.125);
        CHECK(rep.final_ok);
        CHECK(rep.nonincreasing);
        CHECK(rep.decreasing);
        CHECK_FALSE(rep.violator.has_value());
    }
}

TEST_CASE("identical constant members are trivially Cauchy") {
    std::vector<Seq> members(3, Seq::constant(Scalar(1.0, 0.0)));
    CauchyData cd = extract_moduli(members, kAbs, Scale::log(), 1);
    CHECK(cd.m_mu.size() == 2);  // mandatory level plus one free deepening
    Seq fbar = diagonalize(cd);
    auto rep = verify_convergence(cd, fbar, kAbs, Scale::log(), 1);
    for (double d : rep.distances) CHECK(d == 0.0);
    CHECK(rep.final_bound == 1.0);
    CHECK(rep.decreasing);
}

TEST_CASE("separated constants are rejected at the first level") {
    std::vector<Seq> members = {Seq::constant(Scalar(1.0, 0.0)),
                                Seq::constant(Scalar(2.0, 0.0)),
                                Seq::constant(Scalar(1.5, 0.0))};
    try {
        extract_moduli(members, kAbs, Scale::log(), 4);
        FAIL("expected NotCauchyError");
    } catch (const NotCauchyError& e) {
        CHECK(e.mu == 1);
        CHECK(e.k >= 0);
        CHECK(e.l > e.k);
    }
}

TEST_CASE("a drifting member is skipped and flagged by the convergence check") {
    auto members = geometric_members(8);
    Seq bad = seq_add(geometric_member(2), Seq::constant(Scalar(1.0, 0.0)));
    members[2] = bad;
    EvalBudget budget;
    budget.n_max = 100'000;
    CauchyData cd = extract_moduli(members, kAbs, Scale::log(), 4, budget);
    REQUIRE(!cd.m_mu.empty());
    CHECK(cd.m_mu[0] == 3);  // every bracket containing the drifter fails

    Seq fbar = diagonalize(cd);
    auto rep = verify_convergence(cd, fbar, kAbs, Scale::log(), 4, budget);
    CHECK_FALSE(rep.nonincreasing);
    REQUIRE(rep.violator.has_value());
    CHECK(*rep.violator == 2);
    CHECK(rep.final_ok);
    CHECK_FALSE(rep.decreasing);
}

TEST_CASE("explicit seminorm-order map overrides the default") {
    EvalBudget budget;
    budget.n_max = 100'000;
    CauchyData cd = extract_moduli(geometric_members(8), kAbs, Scale::log(), 4, budget,
                                   TailFitPolicy{}, std::vector<int>{0, 0, 0, 0});
    for (int nu : cd.nu_mu) CHECK(nu == 0);
    CHECK_THROWS_AS(extract_moduli(geometric_members(8), kAbs, Scale::log(), 4, budget,
                                   TailFitPolicy{}, std::vector<int>{0, 0}),
                    TypeError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(extract_moduli(geometric_members(2), kAbs, Scale::log(), 4), TypeError);
    CHECK_THROWS_AS(extract_moduli(geometric_members(4), kAbs, Scale::log(), 0), TypeError);
    CauchyData empty;
    CHECK_THROWS_AS(diagonalize(empty), TypeError);
}
