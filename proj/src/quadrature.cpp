#include "gfa/quadrature.hpp"

#include <cmath>

#include "gfa/errors.hpp"

namespace gfa {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return (fa + 4 * fm + fb) * h / 6.0;
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
    if (depth <= 0) throw EvalError("quadrature did not converge");
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (std::fabs(delta) <= 15 * tol) return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol, int max_depth) {
    if (lo == hi) return 0.0;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    double whole = simpson(fa, fm, fb, hi - lo);
    return sign * adapt(f, lo, hi, fa, fm, fb, whole, abs_tol, max_depth);
}

Jet integrate_jet(const std::function<Jet(double)>& f, int order, double lo, double hi,
                  double abs_tol, int max_depth) {
    Jet out(order);
    // component-at-a-time: each derivative order gets its own adaptive
    // subdivision; fine for the small orders used by convolution embeddings
    for (int k = 0; k <= order; ++k) {
        auto fk = [&f, k](double x) { return f(x).deriv(k); };
        out.deriv(k) = integrate(fk, lo, hi, abs_tol, max_depth);
    }
    return out;
}

}  // namespace gfa
