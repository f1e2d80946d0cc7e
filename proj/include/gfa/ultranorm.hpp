#pragma once

#include <optional>

#include "gfa/scale.hpp"
#include "gfa/sequence.hpp"

namespace gfa {

struct EvalBudget {
    long n_max = 1'000'000;
    int schedule_points = 24;
    int window = 8;
};

enum class FitMethod { ClosedForm, TailFit };

/// Estimate of limsup p(f_n)^(r_n), reported in the log domain: exponent is
/// the fitted or analytic limit of e_n = r_n ln p(f_n), value = exp(exponent).
/// exponent is +-infinity exactly when value is infinite resp. zero.
struct UltranormEstimate {
    double exponent = 0;
    double value = 1;
    FitMethod method = FitMethod::TailFit;
    double residual = 0;
    bool low_confidence = false;
};

/// Thresholds turning a tail fit into a verdict. A 0 or infinity verdict is a
/// boundary claim and needs the exponent past `boundary_exponent` with a
/// monotone window, plus one stronger signal: poor linear fit, exponent past
/// `hard_exponent`, or intercept drift between successive fit windows above
/// `drift_threshold`. Without the stronger signal the estimate stays finite;
/// a fit that converges cleanly to, say, -5 is a small nonzero value, not 0.
struct TailFitPolicy {
    double residual_threshold = 0.30;
    double boundary_exponent = 3.0;
    double hard_exponent = 50.0;
    double drift_threshold = 1.0;
};

/// Analytic exponent of a certified growth form under the scale, available
/// for Log, Power and Egorov kinds.
std::optional<double> cert_exponent(const CertParams& params, const Scale& r);

UltranormEstimate ultranorm(const Seq& f, const SeminormFamily& p, int mu, int nu,
                            const Scale& r, const EvalBudget& budget = {},
                            const TailFitPolicy& policy = {});

}  // namespace gfa
