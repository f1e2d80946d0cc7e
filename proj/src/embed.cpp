#include "gfa/embed.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "gfa/errors.hpp"
#include "gfa/quadrature.hpp"
#include "gfa/sampling.hpp"

namespace gfa {

namespace {

// phi(x) with x replaced by (n x) has no clean tree-substitution need: jets
// of scaled profiles obey delta_n^(k)(x) = n^(k+1) phi^(k)(n x).
Jet scaled_profile_jet(const Element& profile, long n, double x, int order) {
    double nd = static_cast<double>(n);
    Jet base = [&]() -> Jet {
        if (const auto* se = std::get_if<SmoothElement>(&profile))
            return jet_eval(se->expr, nd * x, order);
        return std::get<NumericFn>(profile).jet_at(nd * x, order);
    }();
    Jet out(order);
    double factor = nd;
    for (int k = 0; k <= order; ++k) {
        out.deriv(k) = factor * base.deriv(k);
        factor *= nd;
    }
    return out;
}

int profile_max_order(const Element& profile) {
    if (const auto* nf = std::get_if<NumericFn>(&profile)) return nf->max_order();
    return kMaxJetOrder;
}

Jet profile_jet(const Element& profile, double x, int order) {
    if (const auto* se = std::get_if<SmoothElement>(&profile))
        return jet_eval(se->expr, x, order);
    return std::get<NumericFn>(profile).jet_at(x, order);
}

// sup over the support of |phi^(nu)| exactly at order nu (not the running max
// over lower orders); memoized because certificates query it repeatedly
class ProfileSupCache {
public:
    ProfileSupCache(Element profile, double radius)
        : profile_(std::move(profile)), radius_(radius) {}

    double sup_deriv(int nu) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(nu);
        if (it != cache_.end()) return it->second;
        auto src = [this, nu](double x, int extra) {
            Jet j = profile_jet(profile_, x, nu + extra);
            Jet out(extra);
            for (int k = 0; k <= extra; ++k) out.deriv(k) = j.deriv(nu + k);
            return out;
        };
        double v = detail::sup_abs_derivatives(
            [&src](double x, int order) { return src(x, order); }, radius_, 0, 256, true);
        cache_[nu] = v;
        return v;
    }

private:
    Element profile_;
    double radius_;
    std::mutex mu_;
    std::map<int, double> cache_;
};

}  // namespace

Mollifier Mollifier::gaussian() {
    Mollifier m;
    m.profile = SmoothElement{parse_expr("exp(-x^2)/sqrt(pi)"), std::nullopt};
    m.support_radius = 12.0;
    m.name = "gaussian";
    return m;
}

Mollifier Mollifier::bump() {
    // c (1-x^2)^4 on [-1,1], c = 315/256 so the integral is 1; C^3 at the
    // seam, so derivative order is capped at 3
    ExprPtr inside = parse_expr("(315/256)*(1-x^2)^4");
    auto fn = [inside](double x, int order) {
        if (std::fabs(x) < 1.0) return jet_eval(inside, x, order);
        return Jet(order);  // zero outside the support
    };
    Mollifier m;
    m.profile = NumericFn(fn, 3, "bump");
    m.support_radius = 1.0;
    m.name = "bump";
    return m;
}

bool check_normalized(const Mollifier& m, double tol) {
    auto f = [&m](double x) { return profile_jet(m.profile, x, 0).value(); };
    double total = integrate(f, -m.support_radius, m.support_radius, 1e-12);
    return std::fabs(total - 1.0) <= tol;
}

Seq embed_constant(const Element& e) {
    std::string label = "const";
    if (const auto* c = std::get_if<Scalar>(&e)) {
        label = c->imag() == 0 ? std::to_string(c->real())
                               : "(" + std::to_string(c->real()) + "," + std::to_string(c->imag()) + ")";
    } else if (const auto* se = std::get_if<SmoothElement>(&e)) {
        label = to_string(se->expr);
    }
    Seq out = Seq::constant(e, "embed " + label);
    if (const auto* c = std::get_if<Scalar>(&e)) {
        double mod = std::abs(*c);
        if (mod > 0) {
            CertParams params;
            params.C = mod;
            out = out.with_certificate(GrowthCertificate::uniform(params));
        }
    }
    return out;
}

Seq make_delta(const Mollifier& m) {
    auto cache = std::make_shared<ProfileSupCache>(m.profile, m.support_radius);
    Element profile = m.profile;
    int cap = profile_max_order(profile);
    auto gen = [profile, cap](long n) -> Element {
        auto fn = [profile, n](double x, int order) {
            return scaled_profile_jet(profile, n, x, order);
        };
        return NumericFn(fn, cap, "delta_" + std::to_string(n));
    };
    Seq out(gen, 1, "delta[" + m.name + "]");
    auto lookup = [cache, cap](int, int nu) -> std::optional<CertParams> {
        if (nu > cap) return std::nullopt;
        CertParams p;
        p.C = cache->sup_deriv(nu);
        p.a = nu + 1;
        if (!(p.C > 0)) return std::nullopt;
        return p;
    };
    return out.with_certificate(GrowthCertificate::per_index(lookup));
}

Seq embed_by_convolution(const Element& f, const Mollifier& m) {
    if (std::holds_alternative<Scalar>(f))
        throw TypeError("convolution embedding expects a function element");
    Element profile = m.profile;
    Element func = f;
    double L = m.support_radius;
    // only the function argument is differentiated under the integral sign,
    // so the order cap comes from f, not from the kernel
    const auto* fnf = std::get_if<NumericFn>(&func);
    int cap = fnf ? fnf->max_order() : kMaxJetOrder;
    auto gen = [profile, func, L, cap](long n) -> Element {
        double nd = static_cast<double>(n);
        auto fn = [profile, func, L, nd](double x, int order) {
            // f_n(x) = int f(x - v/n) phi(v) dv; x-derivatives hit f only
            auto integrand = [&](double v) {
                double w = profile_jet(profile, v, 0).value();
                Jet jf = [&]() -> Jet {
                    if (const auto* se = std::get_if<SmoothElement>(&func))
                        return jet_eval(se->expr, x - v / nd, order);
                    return std::get<NumericFn>(func).jet_at(x - v / nd, order);
                }();
                return jet_scale(w, jf);
            };
            return integrate_jet(integrand, order, -L, L, 1e-10);
        };
        return NumericFn(fn, cap, "conv_" + std::to_string(n));
    };
    return Seq(gen, 1, "conv[" + m.name + "]");
}

Seq embed_heaviside(const Mollifier& m) {
    Element profile = m.profile;
    double L = m.support_radius;
    auto gen = [profile, L](long n) -> Element {
        double nd = static_cast<double>(n);
        auto fn = [profile, L, nd](double x, int order) {
            if (order > 0)
                throw CapabilityError("step-function embedding supports order-0 seminorms only");
            // int_{v <= n x} phi(v) dv, clipped to the support
            double upper = std::min(L, nd * x);
            Jet out(0);
            if (upper <= -L) return out;
            auto f0 = [&profile](double v) { return profile_jet(profile, v, 0).value(); };
            out.deriv(0) = integrate(f0, -L, upper, 1e-10);
            return out;
        };
        return NumericFn(fn, 0, "step_" + std::to_string(n));
    };
    return Seq(gen, 1, "conv[heaviside," + m.name + "]");
}

UnboundedReport check_unbounded(const Seq& f, const SeminormFamily& p, int mu,
                                const EvalBudget& budget) {
    UnboundedReport rep;
    long n0 = std::max(f.domain_start(), 1L);
    auto sched = geometric_schedule(n0, budget.n_max, budget.schedule_points);
    for (long n : sched) {
        double v = seminorm_eval(p, mu, 0, f.at(n));
        rep.sup_values.emplace_back(n, v);
        rep.exceeds = std::max(rep.exceeds, v);
    }
    std::size_t half = rep.sup_values.size() / 2;
    rep.monotone_growth = rep.sup_values.size() >= 2;
    for (std::size_t i = std::max<std::size_t>(half, 1); i < rep.sup_values.size(); ++i)
        if (rep.sup_values[i].second <= rep.sup_values[i - 1].second) rep.monotone_growth = false;
    return rep;
}

AdmissibilityReport check_scale_admissible(const Seq& f, const SeminormFamily& p,
                                           const Scale& r, QuantMode mode,
                                           const IndexBudget& budget, const EvalBudget& eval,
                                           const TailFitPolicy& policy) {
    AdmissibilityReport rep;
    Classification c = classify(f, p, r, mode, budget, eval, policy);
    rep.a_table = c.witnesses;
    for (const auto& w : c.witnesses) {
        if (!w.estimate.low_confidence && std::isfinite(w.estimate.value) &&
            w.estimate.value > 0) {
            rep.nonzero_witness = {w.mu, w.nu};
            break;
        }
    }
    rep.admissible = c.verdict == Verdict::Moderate && rep.nonzero_witness.has_value();
    return rep;
}

}  // namespace gfa
