#pragma once

#include <optional>
#include <vector>

#include "gfa/classify.hpp"
#include "gfa/errors.hpp"

namespace gfa {

/// Cauchy moduli for a finite member list (f^m)_{m < M} against targets
/// eps_mu = 2^-mu. m_mu[i] / n_mu[i] / nu_mu[i] hold the member index, sample
/// threshold and seminorm order for level mu = i + 1; both index sequences
/// are strictly increasing. The first mu_max levels are mandatory; extraction
/// then deepens as far as the member list and the grid allow, because the
/// deeper brackets are what bring the diagonal close to the late members.
/// The defining inequality, checked on the sampled grid: for n >= n_mu and
/// k, l in [m_mu, m_{mu+1}], p^mu_{nu(mu)}(f^k_n - f^l_n)^{r_n} < 2^-mu.
/// The default order map nu(mu) = mu keeps the seminorm chain monotone,
/// which is what the inductive-mode variant needs as well.
struct CauchyData {
    std::vector<Seq> members;
    int mu_max = 4;
    std::vector<int> m_mu;
    std::vector<long> n_mu;
    std::vector<int> nu_mu;
    std::vector<long> grid;  // sampled thresholds candidates, ascending

    /// Largest mu (1-based) with n_mu <= n. Throws EvalError below n_mu[0].
    int bracket(long n) const;
    /// Member index m_{bracket(n)} driving the diagonal sequence at n.
    int member_for(long n) const;
};

struct NotCauchyError : EvalError {
    int mu, k, l;
    NotCauchyError(int mu_, int k_, int l_);
};

/// Greedy modulus extraction: per level mu the smallest admissible member
/// index (strictly above the previous one) whose tail pairs all have
/// ultranorm distance below 2^-mu, then the smallest grid threshold past the
/// previous one where the pointwise inequality holds on the rest of the grid.
/// nu_map, when given, supplies nu(mu) for mu = 1..mu_max (default mu).
CauchyData extract_moduli(std::vector<Seq> members, const SeminormFamily& p, const Scale& r,
                          int mu_max, const EvalBudget& budget = {},
                          const TailFitPolicy& policy = {},
                          std::optional<std::vector<int>> nu_map = std::nullopt);

/// The diagonal sequence: fbar_n = f^{m_mu(n)}_n on the bracket
/// [n_mu, n_{mu+1}); brackets tile [n_mu[0], infinity).
Seq diagonalize(const CauchyData& cd);

struct ConvergenceReport {
    std::vector<double> distances;  // d(f^m, fbar) per member
    bool nonincreasing = false;     // within a 1e-2 slack along the list
    double final_bound = 0.0;       // 2^{1 - mu_max}
    bool final_ok = false;          // last distance under final_bound
    std::optional<int> violator;    // first member index breaking monotonicity
    bool decreasing = false;        // nonincreasing && final_ok
};

ConvergenceReport verify_convergence(const CauchyData& cd, const Seq& fbar,
                                     const SeminormFamily& p, const Scale& r, int mu_max,
                                     const EvalBudget& budget = {},
                                     const TailFitPolicy& policy = {});

}  // namespace gfa
