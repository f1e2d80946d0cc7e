#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfa/classify.hpp"
#include "gfa/scale.hpp"

namespace gfa {

enum class TriState { No, Yes, Unknown };

const char* to_string(TriState t);

struct LevelVerdict {
    int m = 0;
    Verdict verdict = Verdict::Inconclusive;
};

/// Membership in the algebra built from a whole scale family. The quantifier
/// over levels depends on the family's direction in m:
///   increasing: F = intersection over m, K = union over m
///   decreasing: F = union over m,        K = intersection over m
/// Levels are scanned up to a finite budget, so a Yes on a for-all side means
/// "no falsifier found up to the budget" (recorded in detail) and level
/// carries the first falsifier (for-all side) or the first witness
/// (exists side) when one was found.
struct FamilyVerdict {
    FamilyDirection direction = FamilyDirection::IncreasingInM;
    TriState in_F = TriState::Unknown;
    TriState in_K = TriState::Unknown;
    std::optional<int> f_level;
    std::optional<int> k_level;
    std::vector<LevelVerdict> levels;  // per-level classifications, ascending m
    std::string detail;
};

FamilyVerdict family_membership(const Seq& f, const ScaleFamily& fam,
                                const SeminormFamily& p, QuantMode mode, int mu_max,
                                int nu_max, int m_budget = 6, const EvalBudget& eval = {},
                                const TailFitPolicy& policy = {});

/// Absorption check k * f in K for k in K, f in F, replaying the level
/// bookkeeping of the ideal proof. Increasing case: the product is tested at
/// k's witness level (the common level of the argument) before the general
/// scan. Decreasing case: every level m is paired with max(m, m') where m' is
/// f's witness level, using that the K-levels are nested downward.
struct FamilyIdealReport {
    bool pairing_ok = false;  // k confirmed in K and f confirmed in F
    bool vacuous = false;     // pairing not established; product verdict still reported
    TriState product_in_K = TriState::Unknown;
    std::optional<int> product_level;
    std::vector<std::pair<int, int>> compared_levels;  // (target level, working level)
    std::string detail;
    bool passed() const { return product_in_K == TriState::Yes; }
};

FamilyIdealReport family_ideal_check(const Seq& k, const Seq& f, const ScaleFamily& fam,
                                     const SeminormFamily& p, QuantMode mode, int mu_max,
                                     int nu_max, int m_budget = 6,
                                     const EvalBudget& eval = {},
                                     const TailFitPolicy& policy = {});

}  // namespace gfa
