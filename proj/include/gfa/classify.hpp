#pragma once

#include <vector>

#include "gfa/ultranorm.hpp"

namespace gfa {

/// Quantifier mode over the seminorm indices: Projective demands the bound at
/// every (mu, nu); Inductive demands, for every mu, some witness nu.
enum class QuantMode { Projective, Inductive };

enum class Verdict { Moderate, Negligible, Divergent, Inconclusive };

struct IndexBudget {
    int mu_max = 4;
    int nu_max = 4;
};

struct Witness {
    int mu = 0, nu = 0;
    UltranormEstimate estimate;
};

struct Classification {
    Verdict verdict = Verdict::Inconclusive;
    QuantMode mode = QuantMode::Projective;
    std::vector<Witness> witnesses;
};

const char* to_string(Verdict v);
const char* to_string(QuantMode m);

Classification classify(const Seq& f, const SeminormFamily& p, const Scale& r,
                        QuantMode mode, const IndexBudget& budget = {},
                        const EvalBudget& eval = {}, const TailFitPolicy& policy = {});

/// Ultrapseudometric: ultranorm of the pointwise difference.
UltranormEstimate distance(const Seq& f, const Seq& g, const SeminormFamily& p, int mu,
                           int nu, const Scale& r, const EvalBudget& eval = {},
                           const TailFitPolicy& policy = {});

enum class TriVerdict { Equal, NotEqual, Inconclusive };

const char* to_string(TriVerdict v);

/// Equality in the quotient algebra: the difference classifies Negligible.
/// The sampled difference is computed with a relative zero floor (about 1e-14)
/// so that pure floating-point noise between algebraically identical
/// representatives reads as exact cancellation; deliberate differences many
/// orders above machine epsilon are unaffected.
TriVerdict equal_in_quotient(const Seq& f, const Seq& g, const SeminormFamily& p,
                             const Scale& r, QuantMode mode, const IndexBudget& budget = {},
                             const EvalBudget& eval = {}, const TailFitPolicy& policy = {});

}  // namespace gfa
