#include "gfa/complete.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfa/sampling.hpp"

namespace gfa {

namespace {

// limsup distance between two members; low-confidence estimates count as
// failing the target so the extraction stays conservative
bool pair_below(const std::vector<Seq>& members, int k, int l, const SeminormFamily& p,
                int mu, int nu, const Scale& r, const EvalBudget& budget,
                const TailFitPolicy& policy, double eps) {
    UltranormEstimate est =
        ultranorm(seq_sub(members[k], members[l]), p, mu, nu, r, budget, policy);
    if (est.low_confidence) return false;
    return est.value < eps;
}

double pointwise_power(const SeminormFamily& p, int mu, int nu, const Element& diff,
                       double rn) {
    double v = seminorm_eval(p, mu, nu, diff);
    if (v == 0.0) return 0.0;  // 0^0 = 0 convention carried over
    return std::pow(v, rn);
}

}  // namespace

NotCauchyError::NotCauchyError(int mu_, int k_, int l_)
    : EvalError("family is not Cauchy at level mu=" + std::to_string(mu_) +
                ": members " + std::to_string(k_) + " and " + std::to_string(l_) +
                " stay 2^-mu apart"),
      mu(mu_), k(k_), l(l_) {}

int CauchyData::bracket(long n) const {
    if (n_mu.empty() || n < n_mu.front())
        throw EvalError("index below the first Cauchy bracket");
    int mu = 1;
    for (std::size_t i = 1; i < n_mu.size(); ++i)
        if (n_mu[i] <= n) mu = static_cast<int>(i) + 1;
    return mu;
}

int CauchyData::member_for(long n) const { return m_mu[bracket(n) - 1]; }

CauchyData extract_moduli(std::vector<Seq> members, const SeminormFamily& p, const Scale& r,
                          int mu_max, const EvalBudget& budget, const TailFitPolicy& policy,
                          std::optional<std::vector<int>> nu_map) {
    const int M = static_cast<int>(members.size());
    if (M < 3) throw TypeError("Cauchy extraction needs at least three members");
    if (mu_max < 1) throw TypeError("mu_max must be at least 1");
    if (nu_map && static_cast<int>(nu_map->size()) != mu_max)
        throw TypeError("nu_map must supply one order per level");

    CauchyData cd;
    cd.mu_max = mu_max;

    long n0 = r.domain_start();
    for (const Seq& f : members) n0 = std::max(n0, f.domain_start());
    n0 = std::max(n0, 2L);
    cd.grid = geometric_schedule(n0, std::max(budget.n_max, n0 + 1), budget.schedule_points);

    // Levels are extracted until the member list or the grid runs out, not
    // just to mu_max: the construction quantifies over every level, and the
    // deeper brackets are what pull the diagonal within 2^{1-mu} of the late
    // members. Only the first mu_max levels are mandatory; past them a level
    // that cannot be established ends the extraction quietly.

    // pass 1: member indices, strictly increasing, tail pairs under 2^-mu
    int prev_m = -1;
    for (int mu = 1;; ++mu) {
        double eps = std::ldexp(1.0, -mu);
        int nu = nu_map ? (*nu_map)[std::min<std::size_t>(mu, nu_map->size()) - 1] : mu;
        int chosen = -1;
        int bad_k = -1, bad_l = -1;
        for (int m = prev_m + 1; m <= M - 2 && chosen < 0; ++m) {
            bool ok = true;
            for (int k = m; k < M && ok; ++k)
                for (int l = k + 1; l < M && ok; ++l)
                    if (!pair_below(members, k, l, p, mu, nu, r, budget, policy, eps)) {
                        ok = false;
                        bad_k = k;
                        bad_l = l;
                    }
            if (ok) chosen = m;
        }
        if (chosen < 0) {
            if (mu <= mu_max) throw NotCauchyError(mu, bad_k, bad_l);
            break;
        }
        cd.m_mu.push_back(chosen);
        cd.nu_mu.push_back(nu);
        prev_m = chosen;
    }

    // pass 2: sample thresholds, strictly increasing, pointwise inequality on
    // the rest of the grid over the bracket's member range [m_mu, m_{mu+1}]
    // (the last bracket reaches to the end of the list). A level past mu_max
    // whose threshold cannot be fixed truncates the extraction there.
    std::size_t grid_pos = 0;
    for (int mu = 1; mu <= static_cast<int>(cd.m_mu.size()); ++mu) {
        double eps = std::ldexp(1.0, -mu);
        int nu = cd.nu_mu[mu - 1];
        int lo = cd.m_mu[mu - 1];
        int hi = mu < static_cast<int>(cd.m_mu.size()) ? cd.m_mu[mu] : M - 1;
        long chosen = -1;
        for (std::size_t gi = grid_pos; gi < cd.grid.size() && chosen < 0; ++gi) {
            bool ok = true;
            for (std::size_t gj = gi; gj < cd.grid.size() && ok; ++gj) {
                long n = cd.grid[gj];
                double rn = r(n);
                for (int k = lo; k <= hi && ok; ++k)
                    for (int l = k + 1; l <= hi && ok; ++l) {
                        Element diff = element_sub(members[k].at(n), members[l].at(n));
                        if (pointwise_power(p, mu, nu, diff, rn) >= eps) ok = false;
                    }
            }
            if (ok) {
                chosen = cd.grid[gi];
                grid_pos = gi + 1;
            }
        }
        if (chosen < 0) {
            if (mu <= mu_max)
                throw EvalError("sample grid exhausted before level mu=" +
                                std::to_string(mu) + " could fix its threshold");
            cd.m_mu.resize(mu - 1);
            cd.nu_mu.resize(mu - 1);
            break;
        }
        cd.n_mu.push_back(chosen);
    }

    cd.members = std::move(members);
    return cd;
}

Seq diagonalize(const CauchyData& cd) {
    if (cd.m_mu.empty()) throw TypeError("diagonalize needs extracted moduli");
    auto data = std::make_shared<CauchyData>(cd);
    auto gen = [data](long n) { return data->members[data->member_for(n)].at(n); };
    return Seq(gen, cd.n_mu.front(), "diag");
}

ConvergenceReport verify_convergence(const CauchyData& cd, const Seq& fbar,
                                     const SeminormFamily& p, const Scale& r, int mu_max,
                                     const EvalBudget& budget, const TailFitPolicy& policy) {
    ConvergenceReport rep;
    rep.final_bound = std::ldexp(1.0, 1 - mu_max);
    int nu = mu_max;
    if (!cd.nu_mu.empty())
        nu = cd.nu_mu[std::min<std::size_t>(mu_max, cd.nu_mu.size()) - 1];
    for (const Seq& f : cd.members) {
        UltranormEstimate est =
            ultranorm(seq_sub(f, fbar), p, mu_max, nu, r, budget, policy);
        rep.distances.push_back(est.value);
    }
    rep.nonincreasing = true;
    for (std::size_t i = 1; i < rep.distances.size(); ++i)
        if (rep.distances[i] > rep.distances[i - 1] + 1e-2) {
            rep.nonincreasing = false;
            rep.violator = static_cast<int>(i);
            break;
        }
    rep.final_ok = !rep.distances.empty() && rep.distances.back() < rep.final_bound;
    rep.decreasing = rep.nonincreasing && rep.final_ok;
    return rep;
}

}  // namespace gfa
