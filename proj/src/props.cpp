#include "gfa/props.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfa/rng.hpp"

namespace gfa {

namespace {

constexpr double kPInf = std::numeric_limits<double>::infinity();

// Margin by which lhs <= rhs fails; 0 when satisfied (covers infinities).
double le_margin(double lhs, double rhs) {
    if (lhs <= rhs) return 0.0;
    if (std::isinf(lhs) || std::isinf(rhs)) return kPInf;
    return lhs - rhs;
}

double eq_margin(double a, double b) {
    if (a == b) return 0.0;
    if (std::isinf(a) || std::isinf(b)) return kPInf;
    return std::fabs(a - b);
}

CertParams random_cert(Rng& rng) {
    CertParams c;
    c.C = rng.uniform(0.5, 2.0);
    c.a = rng.uniform(-3.0, 3.0);
    c.b = static_cast<double>(rng.uniform_int(0, 2));
    if (rng.bernoulli(0.5)) {
        c.s = rng.uniform(-2.0, 2.0);
        c.t = rng.uniform(0.2, 1.0);
    }
    return c;
}

Scale random_scale(Rng& rng) {
    double u = rng.uniform();
    if (u < 0.5) return Scale::log();
    if (u < 0.9) return Scale::power(static_cast<double>(rng.uniform_int(1, 6)));
    return Scale::egorov(rng.uniform_int(0, 5));
}

// -inf stands for an absent certificate (exact cancellation) and for value 0
double exponent_of(const std::optional<CertParams>& c, const Scale& r) {
    if (!c) return -kPInf;
    auto e = cert_exponent(*c, r);
    return e ? *e : -kPInf;
}

void record(SuiteReport& rep, double margin, double tol, const char* what) {
    if (margin > rep.max_error) rep.max_error = margin;
    if (margin > tol) {
        ++rep.violations;
        if (rep.detail.empty()) rep.detail = what;
    }
}

// C n^a: the exponent sequence under LogScale is exactly linear in the
// weight, so fits recover a without bias
struct PowerInstance {
    double C = 1, a = 0;
};

PowerInstance random_power(Rng& rng) {
    return {rng.uniform(0.5, 2.0), rng.uniform(-3.0, 3.0)};
}

// pairwise separation keeps the subdominant term from bending the window
std::pair<PowerInstance, PowerInstance> separated_pair(Rng& rng) {
    PowerInstance x = random_power(rng);
    PowerInstance y = random_power(rng);
    while (std::fabs(x.a - y.a) < 0.5) y.a = rng.uniform(-3.0, 3.0);
    return {x, y};
}

Seq power_seq(const PowerInstance& pi) {
    ExprPtr e = Expr::mul(Expr::constant(pi.C),
                          Expr::pow(Expr::var_n(), Expr::constant(pi.a)));
    return Seq::from_expr(e);
}

double fitted_exponent(const Seq& f, const PropsConfig& cfg) {
    UltranormEstimate est = ultranorm(f, SeminormFamily::absolute_value(), 0, 0,
                                      Scale::log(), cfg.eval, cfg.policy);
    return est.exponent;
}

Seq random_scalar_seq(Rng& rng) {
    double c0 = rng.uniform(-2.0, 2.0);
    double c1 = rng.uniform(-2.0, 2.0);
    double e1 = rng.uniform(-1.5, 1.5);
    auto gen = [c0, c1, e1](long n) -> Element {
        return Scalar(c0 + c1 * std::pow(static_cast<double>(n), e1), 0.0);
    };
    return Seq(gen, 1, "rand");
}

}  // namespace

SuiteReport run_ultrametric_suite(const PropsConfig& cfg) {
    SuiteReport rep;
    rep.suite = "ultrametric";
    rep.instances = cfg.instances;
    rep.crosschecks = cfg.crosschecks;
    Rng rng(cfg.seed ^ 0x756c7472u);
    for (int i = 0; i < cfg.instances; ++i) {
        Scale r = random_scale(rng);
        CertParams F = random_cert(rng);
        CertParams G = random_cert(rng);
        CertParams H = random_cert(rng);
        double ef = exponent_of(F, r), eg = exponent_of(G, r);
        double es = exponent_of(cert_add(F, G), r);
        record(rep, le_margin(es, std::max(ef, eg)), cfg.exponent_tol,
               "value of a sum escaped the max bound");
        double dfh = exponent_of(cert_sub(F, H), r);
        double dfg = exponent_of(cert_sub(F, G), r);
        double dgh = exponent_of(cert_sub(G, H), r);
        record(rep, le_margin(dfh, std::max(dfg, dgh)), cfg.exponent_tol,
               "distance broke the strong triangle inequality");
    }
    for (int i = 0; i < cfg.crosschecks; ++i) {
        auto [A, B] = separated_pair(rng);
        double efit = fitted_exponent(seq_add(power_seq(A), power_seq(B)), cfg);
        record(rep, eq_margin(efit, std::max(A.a, B.a)), cfg.crosscheck_tol,
               "fitted sum exponent drifted from the dominant power");
    }
    return rep;
}

SuiteReport run_scalar_suite(const PropsConfig& cfg) {
    SuiteReport rep;
    rep.suite = "scalar";
    rep.instances = cfg.instances;
    rep.crosschecks = cfg.crosschecks;
    Rng rng(cfg.seed ^ 0x73636c72u);
    for (int i = 0; i < cfg.instances; ++i) {
        Scale r = random_scale(rng);
        CertParams F = random_cert(rng);
        double lambda = rng.uniform(0.1, 10.0);
        if (rng.bernoulli(0.5)) lambda = -lambda;
        double ef = exponent_of(F, r);
        double el = exponent_of(cert_scalar_mul(std::fabs(lambda), F), r);
        record(rep, eq_margin(el, ef), cfg.exponent_tol,
               "nonzero scalar multiple changed the value");
    }
    for (int i = 0; i < cfg.crosschecks; ++i) {
        PowerInstance A = random_power(rng);
        double lambda = rng.uniform(0.5, 4.0);
        if (rng.bernoulli(0.5)) lambda = -lambda;
        double efit =
            fitted_exponent(seq_scalar_mul(Scalar(lambda, 0.0), power_seq(A)), cfg);
        record(rep, eq_margin(efit, A.a), cfg.crosscheck_tol,
               "fitted scaled exponent drifted from the original");
    }
    return rep;
}

SuiteReport run_ideal_suite(const PropsConfig& cfg) {
    SuiteReport rep;
    rep.suite = "ideal";
    rep.instances = cfg.instances;
    rep.crosschecks = cfg.crosschecks;
    Rng rng(cfg.seed ^ 0x6964656cu);
    for (int i = 0; i < cfg.instances; ++i) {
        // scale first; the negligible factor is forced below its threshold
        bool use_log = rng.bernoulli(0.5);
        Scale r = use_log ? Scale::log()
                          : Scale::power(static_cast<double>(rng.uniform_int(1, 6)));
        double tmin = use_log ? 0.2 : 1.05 / r.power_m();
        CertParams k;
        k.C = rng.uniform(0.5, 2.0);
        k.a = rng.uniform(-3.0, 3.0);
        k.b = static_cast<double>(rng.uniform_int(0, 2));
        k.s = rng.uniform(-3.0, -0.3);
        k.t = rng.uniform(tmin, std::max(tmin + 0.05, 1.2));
        CertParams f;
        f.C = rng.uniform(0.5, 2.0);
        f.a = rng.uniform(-3.0, 3.0);
        f.b = static_cast<double>(rng.uniform_int(0, 2));
        if (!use_log && rng.bernoulli(0.3)) {
            // moderate with growth at the critical rate
            f.t = 1.0 / r.power_m();
            f.s = rng.uniform(-2.0, 2.0);
        }
        double ek = exponent_of(k, r);
        double ep = exponent_of(cert_mul(k, f), r);
        record(rep, eq_margin(ek, -kPInf), cfg.exponent_tol,
               "negligible factor was not negligible");
        record(rep, eq_margin(ep, -kPInf), cfg.exponent_tol,
               "product with a negligible factor escaped the ideal");
    }
    for (int i = 0; i < cfg.crosschecks; ++i) {
        // sampled classification of a real pair: superpolynomial decay times
        // polynomial growth
        double C = rng.uniform(0.5, 2.0);
        double s = rng.uniform(-3.0, -1.0);
        double t = rng.uniform(0.55, 0.95);
        double a = rng.uniform(0.5, 3.0);
        ExprPtr kx = Expr::mul(
            Expr::constant(C),
            Expr::exp(Expr::mul(Expr::constant(s),
                                Expr::pow(Expr::var_n(), Expr::constant(t)))));
        Seq k = Seq::from_expr(kx);
        Seq f = power_seq({rng.uniform(0.5, 2.0), a});
        Classification c =
            classify(seq_mul(k, f), SeminormFamily::absolute_value(), Scale::log(),
                     QuantMode::Projective, {1, 0}, cfg.eval, cfg.policy);
        record(rep, c.verdict == Verdict::Negligible ? 0.0 : 1.0, 0.5,
               "sampled product with a negligible factor did not classify negligible");
    }
    return rep;
}

SuiteReport run_ring_suite(const PropsConfig& cfg) {
    SuiteReport rep;
    rep.suite = "ring";
    rep.instances = cfg.instances;
    rep.crosschecks = cfg.crosschecks;
    Rng rng(cfg.seed ^ 0x72696e67u);
    for (int i = 0; i < cfg.instances; ++i) {
        Scale r = random_scale(rng);
        CertParams F = random_cert(rng);
        CertParams G = random_cert(rng);
        double ef = exponent_of(F, r), eg = exponent_of(G, r);
        if (std::isinf(ef) && std::isinf(eg) && (ef > 0) != (eg > 0))
            continue;  // 0 * infinity: the bound carries no content
        double em = exponent_of(cert_mul(F, G), r);
        record(rep, le_margin(em, ef + eg), cfg.exponent_tol,
               "product value escaped the submultiplicative bound");
    }
    for (int i = 0; i < cfg.crosschecks; ++i) {
        auto [A, B] = separated_pair(rng);
        double efit = fitted_exponent(seq_mul(power_seq(A), power_seq(B)), cfg);
        record(rep, eq_margin(efit, A.a + B.a), cfg.crosscheck_tol,
               "fitted product exponent drifted from the exponent sum");
    }
    // ring identities in the quotient: rounding differences between the two
    // sides sit far below the flooring threshold and must read as equality
    SeminormFamily abs = SeminormFamily::absolute_value();
    Scale lg = Scale::log();
    int triples = std::min(cfg.instances, 20);
    for (int i = 0; i < triples; ++i) {
        Seq f = random_scalar_seq(rng);
        Seq g = random_scalar_seq(rng);
        Seq h = random_scalar_seq(rng);
        TriVerdict dist = equal_in_quotient(seq_mul(seq_add(f, g), h),
                                            seq_add(seq_mul(f, h), seq_mul(g, h)), abs,
                                            lg, QuantMode::Projective, {1, 0}, cfg.eval,
                                            cfg.policy);
        record(rep, dist == TriVerdict::Equal ? 0.0 : 1.0, 0.5,
               "distributivity failed in the quotient");
        TriVerdict assoc = equal_in_quotient(seq_mul(seq_mul(f, g), h),
                                             seq_mul(f, seq_mul(g, h)), abs, lg,
                                             QuantMode::Projective, {1, 0}, cfg.eval,
                                             cfg.policy);
        record(rep, assoc == TriVerdict::Equal ? 0.0 : 1.0, 0.5,
               "associativity failed in the quotient");
    }
    return rep;
}

std::vector<SuiteReport> run_all_suites(const PropsConfig& cfg) {
    return {run_ultrametric_suite(cfg), run_scalar_suite(cfg), run_ideal_suite(cfg),
            run_ring_suite(cfg)};
}

}  // namespace gfa
