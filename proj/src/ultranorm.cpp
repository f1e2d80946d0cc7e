#include "gfa/ultranorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gfa/errors.hpp"
#include "gfa/sampling.hpp"

namespace gfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

UltranormEstimate make_zero(FitMethod m) {
    return {-kInf, 0.0, m, 0.0, false};
}

UltranormEstimate make_infinite(FitMethod m, double residual = 0.0) {
    return {kInf, kInf, m, residual, false};
}

UltranormEstimate make_finite(double e, FitMethod m, double residual = 0.0,
                              bool low_confidence = false) {
    // keep exponent finite <=> value finite nonzero; past exp-range limits
    // the distinction from a true boundary value is not representable
    if (e > 700.0) return make_infinite(m, residual);
    if (e < -700.0) return make_zero(m);
    return {e, std::exp(e), m, residual, low_confidence};
}

struct LinFit {
    double intercept = 0, slope = 0, rms = 0;
    int k = 0;
};

// least squares e ~ intercept + slope * r; a (near) constant abscissa column
// degenerates to the mean
LinFit fit_line(const std::vector<double>& r, const std::vector<double>& e) {
    LinFit out;
    out.k = static_cast<int>(r.size());
    if (out.k == 0) return out;
    double sr = 0, se = 0;
    for (int i = 0; i < out.k; ++i) {
        sr += r[static_cast<std::size_t>(i)];
        se += e[static_cast<std::size_t>(i)];
    }
    double mr = sr / out.k, me = se / out.k;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < out.k; ++i) {
        double dr = r[static_cast<std::size_t>(i)] - mr;
        sxx += dr * dr;
        sxy += dr * (e[static_cast<std::size_t>(i)] - me);
    }
    if (sxx < 1e-24 * std::max(1.0, mr * mr)) {
        out.intercept = me;
        out.slope = 0;
    } else {
        out.slope = sxy / sxx;
        out.intercept = me - out.slope * mr;
    }
    double ss = 0;
    for (int i = 0; i < out.k; ++i) {
        double d = e[static_cast<std::size_t>(i)] -
                   (out.intercept + out.slope * r[static_cast<std::size_t>(i)]);
        ss += d * d;
    }
    out.rms = std::sqrt(ss / out.k);
    return out;
}

// True when both samples are visibly the same element: equal scalars, or
// smooth elements sharing one expression tree and index binding (the shape
// Seq::constant produces). NumericFn callables are opaque, so they never
// qualify and fall through to the fitted route.
bool stationary_pair(const Element& a, const Element& b) {
    if (const auto* ca = std::get_if<Scalar>(&a)) {
        const auto* cb = std::get_if<Scalar>(&b);
        return cb && *ca == *cb;
    }
    if (const auto* sa = std::get_if<SmoothElement>(&a)) {
        const auto* sb = std::get_if<SmoothElement>(&b);
        return sb && sa->expr == sb->expr && sa->n == sb->n;
    }
    return false;
}

// Spot check of the certified bound on the tail of the schedule, factor 2
// with a small slack for finite-n effects of dominant-term certificates.
// Compared in the log domain: points where sample and prediction both leave
// the representable range (overflow or underflow together) carry no evidence
// either way and are skipped, so certificates stay usable exactly where the
// direct samples degenerate.
bool certificate_honest(const Seq& f, const SeminormFamily& p, int mu, int nu,
                        const CertParams& params, const std::vector<long>& sched) {
    const double slack = std::log(2.0 * 1.05);
    int checked = 0;
    for (std::size_t i = sched.size(); i-- > 0 && checked < 4;) {
        long n = sched[i];
        double measured = seminorm_eval(p, mu, nu, f.at(n));
        double q = params.log_value(n);
        if (measured == 0.0) {
            if (q < -700.0) continue;
            return false;
        }
        if (std::isinf(measured)) {
            if (q > 700.0) continue;
            return false;
        }
        if (!std::isfinite(q)) return false;
        if (std::fabs(std::log(measured) - q) > slack) return false;
        ++checked;
    }
    return true;
}

UltranormEstimate fit_tail(const std::vector<double>& rs, const std::vector<double>& es,
                           int window, const TailFitPolicy& policy, FitMethod method) {
    int k = static_cast<int>(es.size());
    if (k == 0) return {0, 1, method, 0, true};
    if (k < 4) {
        double mean = 0;
        for (double e : es) mean += e;
        return make_finite(mean / k, method, 0, true);
    }
    int w = std::min(window, k);
    auto slice = [&](int lo, int hi) {
        std::vector<double> r(rs.begin() + lo, rs.begin() + hi);
        std::vector<double> e(es.begin() + lo, es.begin() + hi);
        return std::pair(r, e);
    };
    auto [rw, ew] = slice(k - w, k);
    LinFit late = fit_line(rw, ew);

    double drift = 0;
    bool have_drift = false;
    if (k - w >= 4) {
        int lo = std::max(0, k - 2 * w);
        auto [rm, em] = slice(lo, k - w);
        LinFit mid = fit_line(rm, em);
        drift = late.intercept - mid.intercept;
        have_drift = true;
    }

    const double flat_slack = 1e-12;
    bool nondecreasing = true, nonincreasing = true;
    for (std::size_t i = 1; i < ew.size(); ++i) {
        double step = ew[i] - ew[i - 1];
        double slack = flat_slack * std::max(1.0, std::fabs(ew[i]));
        if (step < -slack) nondecreasing = false;
        if (step > slack) nonincreasing = false;
    }
    double total = ew.back() - ew.front();
    bool rising = nondecreasing && total > 1e-9;
    bool falling = nonincreasing && total < -1e-9;

    double rel_residual = late.rms / std::max(1.0, std::fabs(late.intercept));
    bool poor_fit = rel_residual > policy.residual_threshold;

    if (rising && late.intercept > policy.boundary_exponent &&
        (poor_fit || late.intercept > policy.hard_exponent ||
         (have_drift && drift > policy.drift_threshold)))
        return make_infinite(method, rel_residual);
    if (falling && late.intercept < -policy.boundary_exponent &&
        (poor_fit || late.intercept < -policy.hard_exponent ||
         (have_drift && drift < -policy.drift_threshold)))
        return make_zero(method);

    return make_finite(late.intercept, method, rel_residual, poor_fit);
}

}  // namespace

std::optional<double> cert_exponent(const CertParams& raw, const Scale& r) {
    CertParams p = raw.normalized();
    switch (r.kind()) {
        case ScaleKind::Log:
            if (p.s > 0) return kInf;
            if (p.s < 0) return -kInf;
            return p.a;
        case ScaleKind::Power: {
            double tcrit = 1.0 / r.power_m();
            if (p.s == 0.0 || p.t < tcrit) return 0.0;
            if (p.t == tcrit) return p.s;
            return p.s > 0 ? kInf : -kInf;
        }
        case ScaleKind::Egorov:
            // certified forms are eventually nonzero; past m every weight is
            // 0 and c^0 = 1 for c != 0
            return 0.0;
        default:
            return std::nullopt;
    }
}

UltranormEstimate ultranorm(const Seq& f, const SeminormFamily& p, int mu, int nu,
                            const Scale& r, const EvalBudget& budget,
                            const TailFitPolicy& policy) {
    long n0 = std::max({f.domain_start(), r.domain_start(), 2L});

    if (r.kind() == ScaleKind::Egorov) {
        // limsup over the tail n > m of p(f_n)^0 with 0^0 = 0: the estimate is
        // 1 when some sampled tail seminorm is nonzero, else 0. Sampling
        // starts right after m so stationary-zero tails are recognized.
        long start = std::max(n0, r.egorov_m() + 1);
        long n_max = std::max(budget.n_max, start + 1);
        auto sched = geometric_schedule(start, n_max, budget.schedule_points);
        bool any_nonzero = false;
        for (long n : sched)
            if (seminorm_eval(p, mu, nu, f.at(n)) != 0.0) {
                any_nonzero = true;
                break;
            }
        if (!any_nonzero) return make_zero(FitMethod::TailFit);
        UltranormEstimate est = make_finite(0.0, FitMethod::TailFit);
        est.value = 1.0;
        return est;
    }

    auto sched = geometric_schedule(n0, std::max(budget.n_max, n0 + 1), budget.schedule_points);

    if (f.certificate()) {
        if (auto params = f.certificate()->at(mu, nu)) {
            if (certificate_honest(f, p, mu, nu, *params, sched)) {
                if (auto ce = cert_exponent(*params, r)) {
                    if (*ce == kInf) return make_infinite(FitMethod::ClosedForm);
                    if (*ce == -kInf) return make_zero(FitMethod::ClosedForm);
                    UltranormEstimate est = make_finite(*ce, FitMethod::ClosedForm);
                    est.method = FitMethod::ClosedForm;
                    return est;
                }
                // no closed form for this scale kind: fit the certified model
                std::vector<double> rs, es;
                for (long n : sched) {
                    double rn = r(n);
                    rs.push_back(rn);
                    es.push_back(rn * params->log_value(n));
                }
                return fit_tail(rs, es, budget.window, policy, FitMethod::TailFit);
            }
        }
    }

    // sampled route
    std::vector<double> pv;
    pv.reserve(sched.size());
    bool all_same = true;
    Element first = f.at(sched.front());
    for (std::size_t i = 0; i < sched.size(); ++i) {
        Element el = i == 0 ? first : f.at(sched[i]);
        if (i > 0 && all_same) all_same = stationary_pair(first, el);
        pv.push_back(seminorm_eval(p, mu, nu, el));
    }

    if (all_same) {
        // stationary element: p(e)^{r_n} -> 1 exactly for scales that decay
        // to zero, and 0 when p(e) = 0
        if (pv.front() == 0.0) return make_zero(FitMethod::TailFit);
        if (std::isfinite(pv.front()) &&
            (r.kind() == ScaleKind::Log || r.kind() == ScaleKind::Power)) {
            UltranormEstimate est = make_finite(0.0, FitMethod::TailFit);
            est.value = 1.0;
            return est;
        }
    }

    bool all_zero = true;
    int trailing_zeros = 0;
    bool counting = true;
    for (std::size_t i = pv.size(); i-- > 0;) {
        if (pv[i] == 0.0) {
            if (counting) ++trailing_zeros;
        } else {
            counting = false;
            all_zero = false;
        }
    }
    if (all_zero) return make_zero(FitMethod::TailFit);
    if (trailing_zeros >= 3) return make_zero(FitMethod::TailFit);

    std::vector<double> rs, es;
    for (std::size_t i = 0; i < sched.size(); ++i) {
        if (pv[i] == 0.0) continue;
        double rn = r(sched[i]);
        double ln_p = std::log(pv[i]);
        if (std::isinf(pv[i]) || !std::isfinite(ln_p * rn))
            return make_infinite(FitMethod::TailFit);
        rs.push_back(rn);
        es.push_back(rn * ln_p);
    }
    UltranormEstimate est = fit_tail(rs, es, budget.window, policy, FitMethod::TailFit);
    if (trailing_zeros > 0) est.low_confidence = true;
    return est;
}

}  // namespace gfa
