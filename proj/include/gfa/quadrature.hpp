#pragma once

#include <functional>

#include "gfa/jet.hpp"

namespace gfa {

/// Adaptive Simpson integration to absolute tolerance. Throws EvalError when
/// the recursion depth limit is hit before the tolerance is met.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10, int max_depth = 30);

/// Componentwise adaptive Simpson for jet-valued integrands (integral and
/// x-derivatives of a parametrized integral in one pass). The refinement
/// criterion is the worst component error.
Jet integrate_jet(const std::function<Jet(double)>& f, int order, double lo, double hi,
                  double abs_tol = 1e-10, int max_depth = 30);

}  // namespace gfa
