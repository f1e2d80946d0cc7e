#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>

#include "gfa/jet.hpp"

namespace gfa {

using Scalar = std::complex<double>;

/// Smooth real-valued function of x given as an expression tree; `n` is the
/// sequence index binding, present iff the tree mentions n.
struct SmoothElement {
    ExprPtr expr;
    std::optional<long> n;
};

/// Smooth function backed by a numeric jet callback instead of a tree
/// (mollifiers with piecewise definitions, convolution integrals, tables).
/// max_order bounds the derivatives the callback can produce; -1 means none,
/// and such an element rejects every evaluation.
class NumericFn {
public:
    using JetFn = std::function<Jet(double x, int order)>;

    NumericFn(JetFn f, int max_order, std::string name = "")
        : f_(std::move(f)), max_order_(max_order), name_(std::move(name)) {}

    Jet jet_at(double x, int order) const;
    int max_order() const { return max_order_; }
    const std::string& name() const { return name_; }

private:
    JetFn f_;
    int max_order_;
    std::string name_;
};

/// Element of the base algebra: a scalar, or a smooth function in one of two
/// representations.
using Element = std::variant<Scalar, SmoothElement, NumericFn>;

Element element_add(const Element& l, const Element& r);
Element element_sub(const Element& l, const Element& r);
Element element_mul(const Element& l, const Element& r);
Element element_scalar_mul(Scalar lambda, const Element& e);
Element element_derivative(const Element& e);
bool element_is_smooth(const Element& e);

/// Seminorm family p^mu_nu.
///   AbsoluteValue          p(f) = |f| for scalars; indices ignored.
///   SupDerivatives         p^mu_nu(f) = max_{a<=nu} sup_{|x|<=mu} |f^(a)(x)|.
///   SobolevSupDerivatives  fixed derivative order and fixed interval radius;
///                          indices ignored.
/// Suprema are grid maxima and therefore lower bounds of the true sup. The
/// candidate set is a uniform grid of ceil(2 mu G)+1 points joined with a
/// geometric ladder accumulating at 0 (spike-shaped elements concentrate
/// there) and is then locally refined around the best candidates.
class SeminormFamily {
public:
    enum class Kind { AbsoluteValue, SupDerivatives, SobolevSupDerivatives };

    static SeminormFamily absolute_value();
    static SeminormFamily sup_derivatives(double points_per_unit = 256);
    static SeminormFamily sobolev(int order, double radius, double points_per_unit = 256);

    Kind kind() const { return kind_; }
    double grid_density() const { return density_; }
    int sobolev_order() const { return sobolev_order_; }
    double sobolev_radius() const { return sobolev_radius_; }

    /// True when the (mu, nu) indices do not influence the value.
    bool indices_ignored() const { return kind_ != Kind::SupDerivatives; }

private:
    Kind kind_ = Kind::AbsoluteValue;
    double density_ = 256;
    int sobolev_order_ = 1;
    double sobolev_radius_ = 1;
};

double seminorm_eval(const SeminormFamily& p, int mu, int nu, const Element& f);

namespace detail {
/// Core grid maximizer over [-radius, radius]; refine=false restricts to the
/// raw candidate grid, which makes nested-grid comparisons exact.
double sup_abs_derivatives(const std::function<Jet(double, int)>& jet_at, double radius,
                           int nu, double density, bool refine);
}  // namespace detail

using IndexPair = std::pair<int, int>;

/// Checks p^mu_nu(f) <= p^mu'_nu'(f) for every supplied ((mu,nu),(mu',nu'))
/// pair; pairs must be componentwise ordered.
bool check_seminorm_monotone(const SeminormFamily& p, const Element& f,
                             std::span<const std::pair<IndexPair, IndexPair>> pairs);

}  // namespace gfa
