#include "gfa/sequence.hpp"

#include <cmath>

#include "gfa/errors.hpp"

namespace gfa {

CertParams CertParams::normalized() const {
    CertParams p = *this;
    if (p.t == 0.0) {
        p.C *= std::exp(p.s);
        p.s = 0.0;
    }
    if (p.s == 0.0) p.t = 0.0;
    return p;
}

double CertParams::log_value(long n) const {
    double ln = std::log(static_cast<double>(n));
    double v = std::log(C) + a * ln;
    if (b != 0.0) v += b * std::log(std::max(ln, 1e-300));
    if (s != 0.0) v += s * std::pow(static_cast<double>(n), t);
    return v;
}

GrowthCertificate GrowthCertificate::uniform(CertParams p) {
    if (!(p.C > 0)) throw TypeError("certificate constant C must be positive");
    if (p.t < 0) throw TypeError("certificate exponent t must be non-negative");
    GrowthCertificate c;
    c.at_ = [p = p.normalized()](int, int) { return std::optional<CertParams>(p); };
    return c;
}

GrowthCertificate GrowthCertificate::per_index(Lookup f) {
    GrowthCertificate c;
    c.at_ = [f = std::move(f)](int mu, int nu) -> std::optional<CertParams> {
        auto p = f(mu, nu);
        return p ? std::optional<CertParams>(p->normalized()) : std::nullopt;
    };
    return c;
}

std::optional<CertParams> GrowthCertificate::at(int mu, int nu) const { return at_(mu, nu); }

namespace {

// Orders certified forms by asymptotic growth: exp factor first, then the
// power, then the log power. Returns -1, 0, +1.
int growth_compare(const CertParams& l, const CertParams& r) {
    auto sgn = [](double v) { return v > 0 ? 1 : v < 0 ? -1 : 0; };
    if (l.t != r.t) {
        // the term with the larger t dominates the exp comparison; its sign
        // tells whether it grows or dies relative to the other
        const CertParams& big = l.t > r.t ? l : r;
        int flip = l.t > r.t ? 1 : -1;
        if (big.s != 0.0) return flip * sgn(big.s);
    } else if (l.s != r.s) {
        return sgn(l.s - r.s);
    }
    if (l.a != r.a) return sgn(l.a - r.a);
    if (l.b != r.b) return sgn(l.b - r.b);
    return 0;
}

std::optional<CertParams> combine_sum(const CertParams& l, const CertParams& r, bool subtract) {
    CertParams a = l.normalized(), b = r.normalized();
    int cmp = growth_compare(a, b);
    if (cmp > 0) return a;
    if (cmp < 0) return b;
    // full tie up to constants
    CertParams out = a;
    if (!subtract) {
        out.C = a.C + b.C;
        return out;
    }
    double diff = std::fabs(a.C - b.C);
    if (diff == 0.0) return std::nullopt;  // certified forms cancel exactly
    out.C = diff;
    return out;
}

}  // namespace

std::optional<CertParams> cert_add(const CertParams& l, const CertParams& r) {
    return combine_sum(l, r, false);
}

std::optional<CertParams> cert_sub(const CertParams& l, const CertParams& r) {
    return combine_sum(l, r, true);
}

CertParams cert_mul(const CertParams& l, const CertParams& r) {
    CertParams a = l.normalized(), b = r.normalized();
    CertParams out;
    out.C = a.C * b.C;
    out.a = a.a + b.a;
    out.b = a.b + b.b;
    if (a.t == b.t) {
        out.t = a.t;
        out.s = a.s + b.s;
    } else {
        // keep the dominant exp factor; the other is lower order
        const CertParams& big = a.t > b.t ? a : b;
        out.t = big.t;
        out.s = big.s;
    }
    return out.normalized();
}

CertParams cert_scalar_mul(double abs_lambda, const CertParams& p) {
    CertParams out = p.normalized();
    out.C *= abs_lambda;
    return out;
}

Seq::Seq(Generator g, long domain_start, std::string label)
    : gen_(std::move(g)), domain_start_(domain_start), label_(std::move(label)) {}

Seq Seq::from_expr(ExprPtr e, long domain_start, std::string label) {
    if (label.empty()) label = to_string(e);
    if (e->uses_m) throw TypeError("sequence expression may not use the family index m");
    bool uses_x = e->uses_x, uses_n = e->uses_n;
    Generator g = [e = std::move(e), uses_x, uses_n](long n) -> Element {
        if (uses_x)
            return SmoothElement{e, uses_n ? std::optional<long>(n) : std::nullopt};
        EvalEnv env;
        env.has_x = false;
        env.n = static_cast<double>(n);
        return Scalar(eval(*e, env), 0.0);
    };
    return Seq(std::move(g), domain_start, std::move(label));
}

Seq Seq::from_expr(std::string_view src, long domain_start, std::string label) {
    return from_expr(parse_expr(src), domain_start, std::move(label));
}

Seq Seq::constant(Element e, std::string label) {
    return Seq([e](long) { return e; }, 1, std::move(label));
}

Seq Seq::zero() { return constant(Scalar(0.0, 0.0), "0"); }

Element Seq::at(long n) const {
    if (n < domain_start_)
        throw EvalError("sequence '" + label_ + "' evaluated below its domain start");
    return gen_(n);
}

Seq Seq::with_certificate(GrowthCertificate c) const {
    Seq out = *this;
    out.cert_ = std::move(c);
    return out;
}

Seq Seq::without_certificate() const {
    Seq out = *this;
    out.cert_.reset();
    return out;
}

Seq Seq::with_label(std::string label) const {
    Seq out = *this;
    out.label_ = std::move(label);
    return out;
}

namespace {

Seq combine_seq(const Seq& f, const Seq& g, Element (*op)(const Element&, const Element&),
                std::optional<CertParams> (*cert_op)(const CertParams&, const CertParams&),
                const char* glyph) {
    long start = std::max(f.domain_start(), g.domain_start());
    auto fg = [f, g, op](long n) { return op(f.at(n), g.at(n)); };
    Seq out(fg, start, f.label() + glyph + g.label());
    if (f.certificate() && g.certificate()) {
        auto cf = *f.certificate(), cg = *g.certificate();
        out = out.with_certificate(GrowthCertificate::per_index(
            [cf, cg, cert_op](int mu, int nu) -> std::optional<CertParams> {
                auto a = cf.at(mu, nu), b = cg.at(mu, nu);
                if (!a || !b) return std::nullopt;
                return cert_op(*a, *b);
            }));
    }
    return out;
}

std::optional<CertParams> cert_mul_opt(const CertParams& l, const CertParams& r) {
    return cert_mul(l, r);
}

}  // namespace

Seq seq_add(const Seq& f, const Seq& g) { return combine_seq(f, g, element_add, cert_add, "+"); }
Seq seq_sub(const Seq& f, const Seq& g) { return combine_seq(f, g, element_sub, cert_sub, "-"); }
Seq seq_mul(const Seq& f, const Seq& g) { return combine_seq(f, g, element_mul, cert_mul_opt, "*"); }

Seq seq_scalar_mul(Scalar lambda, const Seq& f) {
    auto gen = [f, lambda](long n) { return element_scalar_mul(lambda, f.at(n)); };
    Seq out(gen, f.domain_start(), "(" + std::to_string(lambda.real()) + ")*" + f.label());
    double al = std::abs(lambda);
    if (f.certificate() && al > 0) {
        auto cf = *f.certificate();
        out = out.with_certificate(GrowthCertificate::per_index(
            [cf, al](int mu, int nu) -> std::optional<CertParams> {
                auto p = cf.at(mu, nu);
                if (!p) return std::nullopt;
                return cert_scalar_mul(al, *p);
            }));
    }
    return out;
}

Seq seq_derivative(const Seq& f) {
    auto gen = [f](long n) { return element_derivative(f.at(n)); };
    Seq out(gen, f.domain_start(), f.label() + "'");
    if (f.certificate()) {
        auto cf = *f.certificate();
        out = out.with_certificate(GrowthCertificate::per_index(
            [cf](int mu, int nu) { return cf.at(mu, nu + 1); }));
    }
    return out;
}

bool check_certificate(const Seq& f, const SeminormFamily& p, int mu, int nu,
                       std::span<const long> samples, double factor) {
    auto cert = f.certificate();
    if (!cert) return true;
    auto params = cert->at(mu, nu);
    if (!params) return true;
    for (long n : samples) {
        if (n < f.domain_start()) continue;
        double measured = seminorm_eval(p, mu, nu, f.at(n));
        double predicted = std::exp(params->log_value(n));
        if (measured == 0.0) continue;
        if (measured > predicted * factor || measured < predicted / factor) return false;
    }
    return true;
}

}  // namespace gfa
