#include "gfa/family.hpp"

#include <algorithm>

#include "gfa/errors.hpp"

namespace gfa {

namespace {

bool level_in_F(Verdict v) { return v == Verdict::Moderate || v == Verdict::Negligible; }
bool level_not_F(Verdict v) { return v == Verdict::Divergent; }
bool level_in_K(Verdict v) { return v == Verdict::Negligible; }
bool level_not_K(Verdict v) { return v == Verdict::Moderate || v == Verdict::Divergent; }

struct Aggregate {
    TriState state = TriState::Unknown;
    std::optional<int> level;  // first falsifier (forall) or first witness (exists)
};

template <class Ok, class Fail>
Aggregate aggregate_forall(const std::vector<LevelVerdict>& levels, Ok ok, Fail fail) {
    bool unknown = false;
    for (const auto& lv : levels) {
        if (fail(lv.verdict)) return {TriState::No, lv.m};
        if (!ok(lv.verdict)) unknown = true;
    }
    if (unknown) return {TriState::Unknown, std::nullopt};
    return {TriState::Yes, std::nullopt};
}

template <class Ok, class Fail>
Aggregate aggregate_exists(const std::vector<LevelVerdict>& levels, Ok ok, Fail fail) {
    bool unknown = false;
    for (const auto& lv : levels) {
        if (ok(lv.verdict)) return {TriState::Yes, lv.m};
        if (!fail(lv.verdict)) unknown = true;
    }
    return {unknown ? TriState::Unknown : TriState::No, std::nullopt};
}

std::string describe_side(const char* name, bool forall, const Aggregate& a, int m_hi) {
    std::string s = std::string(name) + ": ";
    switch (a.state) {
        case TriState::Yes:
            s += forall ? "no falsifier found up to m=" + std::to_string(m_hi)
                        : "witness m=" + std::to_string(*a.level);
            break;
        case TriState::No:
            s += forall ? "falsifier m=" + std::to_string(*a.level)
                        : "no witness found up to m=" + std::to_string(m_hi);
            break;
        case TriState::Unknown:
            s += "inconclusive level blocks the verdict";
            break;
    }
    return s;
}

}  // namespace

const char* to_string(TriState t) {
    switch (t) {
        case TriState::No: return "no";
        case TriState::Yes: return "yes";
        case TriState::Unknown: return "unknown";
    }
    return "unknown";
}

FamilyVerdict family_membership(const Seq& f, const ScaleFamily& fam,
                                const SeminormFamily& p, QuantMode mode, int mu_max,
                                int nu_max, int m_budget, const EvalBudget& eval,
                                const TailFitPolicy& policy) {
    FamilyVerdict out;
    out.direction = family_direction(fam);
    if (out.direction == FamilyDirection::Neither)
        throw TypeError("scale family has no monotone direction in m");
    if (m_budget < 1) throw TypeError("family level budget must be at least 1");

    const int m_lo = fam.m_first();
    const int m_hi = std::min(fam.m_last(), m_lo + m_budget - 1);
    IndexBudget idx{mu_max, nu_max};
    for (int m = m_lo; m <= m_hi; ++m) {
        Classification c = classify(f, p, fam.at(m), mode, idx, eval, policy);
        out.levels.push_back({m, c.verdict});
    }

    const bool increasing = out.direction == FamilyDirection::IncreasingInM;
    Aggregate af = increasing ? aggregate_forall(out.levels, level_in_F, level_not_F)
                              : aggregate_exists(out.levels, level_in_F, level_not_F);
    Aggregate ak = increasing ? aggregate_exists(out.levels, level_in_K, level_not_K)
                              : aggregate_forall(out.levels, level_in_K, level_not_K);
    out.in_F = af.state;
    out.f_level = af.level;
    out.in_K = ak.state;
    out.k_level = ak.level;
    out.detail = describe_side("in_F", increasing, af, m_hi) + "; " +
                 describe_side("in_K", !increasing, ak, m_hi);
    return out;
}

FamilyIdealReport family_ideal_check(const Seq& k, const Seq& f, const ScaleFamily& fam,
                                     const SeminormFamily& p, QuantMode mode, int mu_max,
                                     int nu_max, int m_budget, const EvalBudget& eval,
                                     const TailFitPolicy& policy) {
    FamilyIdealReport rep;
    FamilyVerdict vk =
        family_membership(k, fam, p, mode, mu_max, nu_max, m_budget, eval, policy);
    FamilyVerdict vf =
        family_membership(f, fam, p, mode, mu_max, nu_max, m_budget, eval, policy);
    rep.pairing_ok = vk.in_K == TriState::Yes && vf.in_F == TriState::Yes;
    rep.vacuous = !rep.pairing_ok;

    Seq prod = seq_mul(k, f);
    const bool increasing = vk.direction == FamilyDirection::IncreasingInM;
    IndexBudget idx{mu_max, nu_max};

    if (increasing && vk.k_level) {
        // the proof's common level: k lands in K at this m, f is in F at every
        // m, and the fixed-level ideal property drops the product into K there
        int common = *vk.k_level;
        rep.compared_levels.push_back({common, common});
        Classification cp = classify(prod, p, fam.at(common), mode, idx, eval, policy);
        if (cp.verdict == Verdict::Negligible) {
            rep.product_in_K = TriState::Yes;
            rep.product_level = common;
            rep.detail = "product negligible at common level m=" + std::to_string(common);
        }
    }

    if (rep.product_in_K != TriState::Yes) {
        FamilyVerdict vp =
            family_membership(prod, fam, p, mode, mu_max, nu_max, m_budget, eval, policy);
        rep.product_in_K = vp.in_K;
        rep.product_level = vp.k_level;
        if (!rep.detail.empty()) rep.detail += "; ";
        rep.detail += vp.detail;
        if (!increasing && vf.f_level) {
            // nested K-levels: the target level m is served via max(m, m')
            for (const auto& lv : vp.levels)
                rep.compared_levels.push_back({lv.m, std::max(lv.m, *vf.f_level)});
        }
    }

    if (rep.vacuous) {
        rep.detail += "; pairing not established (k in K: " + std::string(to_string(vk.in_K)) +
                      ", f in F: " + std::string(to_string(vf.in_F)) + ")";
    }
    return rep;
}

}  // namespace gfa
