#include "gfa/classify.hpp"

#include <cmath>

#include "gfa/errors.hpp"

namespace gfa {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Moderate: return "moderate";
        case Verdict::Negligible: return "negligible";
        case Verdict::Divergent: return "divergent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(QuantMode m) {
    return m == QuantMode::Projective ? "projective" : "inductive";
}

const char* to_string(TriVerdict v) {
    switch (v) {
        case TriVerdict::Equal: return "equal";
        case TriVerdict::NotEqual: return "not-equal";
        case TriVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

bool est_zero(const UltranormEstimate& e) { return e.value == 0.0 && !e.low_confidence; }
bool est_infinite(const UltranormEstimate& e) { return std::isinf(e.value); }
bool est_finite(const UltranormEstimate& e) { return std::isfinite(e.value) && !e.low_confidence; }

}  // namespace

Classification classify(const Seq& f, const SeminormFamily& p, const Scale& r,
                        QuantMode mode, const IndexBudget& budget, const EvalBudget& eval,
                        const TailFitPolicy& policy) {
    Classification out;
    out.mode = mode;

    int mu_lo = 1, mu_hi = budget.mu_max, nu_lo = 0, nu_hi = budget.nu_max;
    if (p.indices_ignored()) {
        mu_lo = mu_hi = 0;
        nu_lo = nu_hi = 0;
    }

    bool any_lowconf = false, any_divergent = false;

    if (mode == QuantMode::Projective) {
        bool all_zero = true, all_finite = true;
        for (int mu = mu_lo; mu <= mu_hi; ++mu) {
            for (int nu = nu_lo; nu <= nu_hi; ++nu) {
                auto est = ultranorm(f, p, mu, nu, r, eval, policy);
                out.witnesses.push_back({mu, nu, est});
                if (est.low_confidence) any_lowconf = true;
                if (est_infinite(est)) {
                    any_divergent = true;
                    all_finite = false;
                }
                if (!est_zero(est)) all_zero = false;
            }
        }
        if (any_lowconf) out.verdict = Verdict::Inconclusive;
        else if (any_divergent) out.verdict = Verdict::Divergent;
        else if (all_zero) out.verdict = Verdict::Negligible;
        else if (all_finite) out.verdict = Verdict::Moderate;
        else out.verdict = Verdict::Inconclusive;
        return out;
    }

    // Inductive: for each mu, scan nu for witnesses.
    bool every_mu_has_finite = true, every_mu_has_zero = true;
    bool any_mu_divergent = false, any_mu_inconclusive = false;
    for (int mu = mu_lo; mu <= mu_hi; ++mu) {
        bool finite_here = false, zero_here = false, lowconf_here = false, all_inf = true;
        for (int nu = nu_lo; nu <= nu_hi; ++nu) {
            auto est = ultranorm(f, p, mu, nu, r, eval, policy);
            out.witnesses.push_back({mu, nu, est});
            if (est.low_confidence) lowconf_here = true;
            if (est_finite(est)) finite_here = true;
            if (est_zero(est)) zero_here = true;
            if (!est_infinite(est)) all_inf = false;
        }
        if (all_inf) any_mu_divergent = true;
        else if (!finite_here && lowconf_here) any_mu_inconclusive = true;
        if (!finite_here) every_mu_has_finite = false;
        if (!zero_here) every_mu_has_zero = false;
    }
    if (any_mu_divergent) out.verdict = Verdict::Divergent;
    else if (any_mu_inconclusive) out.verdict = Verdict::Inconclusive;
    else if (every_mu_has_zero) out.verdict = Verdict::Negligible;
    else if (every_mu_has_finite) out.verdict = Verdict::Moderate;
    else out.verdict = Verdict::Inconclusive;
    return out;
}

UltranormEstimate distance(const Seq& f, const Seq& g, const SeminormFamily& p, int mu,
                           int nu, const Scale& r, const EvalBudget& eval,
                           const TailFitPolicy& policy) {
    return ultranorm(seq_sub(f, g), p, mu, nu, r, eval, policy);
}

namespace {

// Pointwise difference with a relative zero floor: components within
// 2^-46 of the operand magnitudes collapse to exact zero. This separates
// "identical up to rounding" (associativity rearrangements and the like,
// noise near 2^-52) from deliberate perturbations at 1e-12 or larger.
Seq floored_difference(const Seq& f, const Seq& g) {
    constexpr double kFloor = 0x1p-46;
    long start = std::max(f.domain_start(), g.domain_start());
    auto gen = [f, g](long n) -> Element {
        Element a = f.at(n), b = g.at(n);
        if (std::holds_alternative<Scalar>(a) && std::holds_alternative<Scalar>(b)) {
            Scalar sa = std::get<Scalar>(a), sb = std::get<Scalar>(b);
            Scalar d = sa - sb;
            if (std::abs(d) <= kFloor * (std::abs(sa) + std::abs(sb))) return Scalar(0, 0);
            return d;
        }
        // smooth case: floor each jet component against the operand jets
        auto diff_fn = [a, b](double x, int order) {
            auto jet_of = [x, order](const Element& e) -> Jet {
                if (const auto* se = std::get_if<SmoothElement>(&e))
                    return jet_eval(se->expr, x, order,
                                    se->n ? std::optional<double>(static_cast<double>(*se->n))
                                          : std::nullopt);
                if (const auto* nf = std::get_if<NumericFn>(&e)) return nf->jet_at(x, order);
                Jet j(order);
                j.deriv(0) = std::get<Scalar>(e).real();
                return j;
            };
            Jet ja = jet_of(a), jb = jet_of(b);
            Jet jd = jet_sub(ja, jb);
            for (int k = 0; k <= jd.order(); ++k) {
                double mag = std::fabs(ja.deriv(k)) + std::fabs(jb.deriv(k));
                if (std::fabs(jd.deriv(k)) <= kFloor * mag) jd.deriv(k) = 0.0;
            }
            return jd;
        };
        return NumericFn(diff_fn, kMaxJetOrder, "diff");
    };
    return Seq(gen, start, f.label() + " - " + g.label());
}

}  // namespace

TriVerdict equal_in_quotient(const Seq& f, const Seq& g, const SeminormFamily& p,
                             const Scale& r, QuantMode mode, const IndexBudget& budget,
                             const EvalBudget& eval, const TailFitPolicy& policy) {
    auto cf = classify(f, p, r, mode, budget, eval, policy);
    auto cg = classify(g, p, r, mode, budget, eval, policy);
    auto moderate = [](Verdict v) { return v == Verdict::Moderate || v == Verdict::Negligible; };
    if (!moderate(cf.verdict) || !moderate(cg.verdict)) return TriVerdict::Inconclusive;

    auto cd = classify(floored_difference(f, g), p, r, mode, budget, eval, policy);
    if (cd.verdict == Verdict::Negligible) return TriVerdict::Equal;

    // NotEqual needs a confident witness bounded away from zero
    for (const auto& w : cd.witnesses) {
        if (w.estimate.low_confidence) continue;
        if (std::isinf(w.estimate.value)) return TriVerdict::NotEqual;
        if (w.estimate.value > 0 && w.estimate.exponent > -3.0) return TriVerdict::NotEqual;
    }
    return TriVerdict::Inconclusive;
}

}  // namespace gfa
