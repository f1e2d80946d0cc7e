#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gfa/classify.hpp"

namespace gfa {

/// Normalized kernel profile for delta sequences and convolution embeddings.
/// The Gaussian profile is an expression tree (derivatives of every order);
/// the polynomial bump c (1-x^2)^4 on [-1, 1] is C^3 only and is carried as a
/// piecewise numeric element with derivative order capped accordingly.
struct Mollifier {
    Element profile;
    double support_radius = 12.0;  // effective support [-radius, radius]
    std::string name;

    static Mollifier gaussian();
    static Mollifier bump();
};

/// Quadrature check of the normalization integral over the support.
bool check_normalized(const Mollifier& m, double tol = 1e-8);

/// Canonical constant embedding n -> e. Scalar elements carry the closed-form
/// certificate C = |e|; smooth constants are recognized exactly by the
/// stationary-element path of the estimator instead (their seminorm value
/// depends on indices not known at construction time).
Seq embed_constant(const Element& e);

/// delta_n(x) = n phi(n x), with per-(mu, nu) certificate
/// p(delta_n) ~ sup|phi^(nu)| n^(nu+1).
Seq make_delta(const Mollifier& m);

/// f_n = f * delta_n by adaptive quadrature over the kernel support. Smooth f
/// supports derivatives through the integrand jets.
Seq embed_by_convolution(const Element& f, const Mollifier& m);

/// Convolution embedding of the unit step (value-only elements: order-0
/// seminorms; higher derivative orders raise CapabilityError).
Seq embed_heaviside(const Mollifier& m);

struct UnboundedReport {
    std::vector<std::pair<long, double>> sup_values;  // (n, p^mu_0(f_n))
    bool monotone_growth = false;                     // strictly increasing tail
    double exceeds = 0;                               // largest value seen
};

/// Samples p^mu_0(f_n) along the schedule. For a delta sequence the sampled
/// suprema pass every fixed bound, which is the computational content of the
/// unboundedness claim.
UnboundedReport check_unbounded(const Seq& f, const SeminormFamily& p, int mu = 1,
                                const EvalBudget& budget = {});

struct AdmissibilityReport {
    std::vector<Witness> a_table;
    bool admissible = false;
    std::optional<std::pair<int, int>> nonzero_witness;
};

/// A scale is admissible for an embedding when every sampled limsup value
/// A^mu_nu is finite under the mode's quantifiers and some witness is
/// nonzero.
AdmissibilityReport check_scale_admissible(const Seq& f, const SeminormFamily& p,
                                           const Scale& r, QuantMode mode,
                                           const IndexBudget& budget = {},
                                           const EvalBudget& eval = {},
                                           const TailFitPolicy& policy = {});

}  // namespace gfa
