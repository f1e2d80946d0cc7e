#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "gfa/seminorm.hpp"

namespace gfa {

/// Parameters of the asymptotic form p(f_n) ~ C n^a (ln n)^b exp(s n^t),
/// C > 0, t >= 0. Normalization: t = 0 folds the exp factor into C.
struct CertParams {
    double C = 1, a = 0, b = 0, s = 0, t = 0;

    CertParams normalized() const;
    /// ln of the certified bound at index n.
    double log_value(long n) const;
};

/// Closed-form growth description of a sequence under a seminorm family,
/// either uniform in (mu, nu) or per index pair. Absence at a pair means
/// "no closed form known there".
class GrowthCertificate {
public:
    using Lookup = std::function<std::optional<CertParams>(int mu, int nu)>;

    static GrowthCertificate uniform(CertParams p);
    static GrowthCertificate per_index(Lookup f);

    std::optional<CertParams> at(int mu, int nu) const;

private:
    Lookup at_;
};

/// Combination rules used by the pointwise sequence operations. For sums and
/// differences the dominant term wins (compare exp factors, then a, then b);
/// on a full tie the constants combine, and a difference whose certified
/// forms cancel exactly has no certificate (returns nullopt).
std::optional<CertParams> cert_add(const CertParams& l, const CertParams& r);
std::optional<CertParams> cert_sub(const CertParams& l, const CertParams& r);
CertParams cert_mul(const CertParams& l, const CertParams& r);
CertParams cert_scalar_mul(double abs_lambda, const CertParams& p);

/// Sequence of base-algebra elements with lazy generator, optional growth
/// certificate, and a reporting label.
class Seq {
public:
    using Generator = std::function<Element(long n)>;

    Seq(Generator g, long domain_start = 1, std::string label = "");

    static Seq from_expr(ExprPtr e, long domain_start = 1, std::string label = "");
    static Seq from_expr(std::string_view src, long domain_start = 1, std::string label = "");
    static Seq constant(Element e, std::string label = "");
    static Seq zero();

    Element at(long n) const;  // EvalError below domain_start
    long domain_start() const { return domain_start_; }
    const std::string& label() const { return label_; }
    const std::optional<GrowthCertificate>& certificate() const { return cert_; }

    Seq with_certificate(GrowthCertificate c) const;
    Seq without_certificate() const;
    Seq with_label(std::string label) const;

private:
    Generator gen_;
    long domain_start_;
    std::string label_;
    std::optional<GrowthCertificate> cert_;
};

Seq seq_add(const Seq& f, const Seq& g);
Seq seq_sub(const Seq& f, const Seq& g);
Seq seq_mul(const Seq& f, const Seq& g);
Seq seq_scalar_mul(Scalar lambda, const Seq& f);
Seq seq_derivative(const Seq& f);

/// Spot check: certified bound vs. measured seminorm at the sampled indices,
/// within the given multiplicative factor. Sampled values of exactly 0 are
/// tolerated (the certificate is an upper-bound form).
bool check_certificate(const Seq& f, const SeminormFamily& p, int mu, int nu,
                       std::span<const long> samples, double factor = 2.0);

}  // namespace gfa
