#pragma once

#include <optional>
#include <vector>

#include "gfa/expr.hpp"

namespace gfa {

/// Highest derivative order the jet evaluator will propagate.
inline constexpr int kMaxJetOrder = 16;

/// Derivative tuple (f(x), f'(x), ..., f^(k)(x)) of a smooth function at one
/// point. Entries are plain derivative values, not Taylor coefficients.
class Jet {
public:
    explicit Jet(int order) : d_(static_cast<std::size_t>(order) + 1, 0.0) {}

    int order() const { return static_cast<int>(d_.size()) - 1; }
    double deriv(int k) const { return d_[static_cast<std::size_t>(k)]; }
    double& deriv(int k) { return d_[static_cast<std::size_t>(k)]; }
    double value() const { return d_[0]; }

private:
    std::vector<double> d_;
};

/// Evaluates e and its first `order` x-derivatives at x, with optional
/// bindings for the index symbols n and m. Throws CapabilityError when
/// order exceeds kMaxJetOrder and EvalError on domain-guard violations.
Jet jet_eval(const Expr& e, double x, int order,
             std::optional<double> n = std::nullopt,
             std::optional<double> m = std::nullopt);

inline Jet jet_eval(const ExprPtr& e, double x, int order,
                    std::optional<double> n = std::nullopt,
                    std::optional<double> m = std::nullopt) {
    return jet_eval(*e, x, order, n, m);
}

/// Pointwise jet arithmetic. Orders are truncated to the shorter operand.
Jet jet_add(const Jet& l, const Jet& r);
Jet jet_sub(const Jet& l, const Jet& r);
Jet jet_scale(double c, const Jet& j);
Jet jet_mul(const Jet& l, const Jet& r);  // Leibniz rule

/// Jet of f' recovered from a jet of f; the order drops by one.
Jet jet_shift(const Jet& j);

}  // namespace gfa
