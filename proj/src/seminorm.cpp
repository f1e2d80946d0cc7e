#include "gfa/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gfa/errors.hpp"

namespace gfa {

Jet NumericFn::jet_at(double x, int order) const {
    if (order > kMaxJetOrder)
        throw CapabilityError("jet order exceeds supported maximum");
    if (order > max_order_)
        throw CapabilityError("element '" + name_ + "' provides derivatives only up to order " +
                              std::to_string(max_order_));
    if (max_order_ < 0)
        throw CapabilityError("element '" + name_ + "' has no usable derivatives");
    return f_(x, order);
}

namespace {

double real_part_checked(Scalar c, const char* what) {
    if (c.imag() != 0.0)
        throw TypeError(std::string(what) + ": complex coefficient on a real-valued function");
    return c.real();
}

std::optional<long> merge_bindings(const std::optional<long>& l, const std::optional<long>& r) {
    if (l && r && *l != *r) throw TypeError("operands bind different sequence indices");
    return l ? l : r;
}

NumericFn::JetFn smooth_jet_fn(const SmoothElement& se) {
    return [se](double x, int order) {
        return jet_eval(se.expr, x, order,
                        se.n ? std::optional<double>(static_cast<double>(*se.n)) : std::nullopt);
    };
}

NumericFn to_numeric(const Element& e) {
    if (const auto* nf = std::get_if<NumericFn>(&e)) return *nf;
    if (const auto* se = std::get_if<SmoothElement>(&e))
        return NumericFn(smooth_jet_fn(*se), kMaxJetOrder, to_string(se->expr));
    double c = real_part_checked(std::get<Scalar>(e), "scalar lift");
    return NumericFn([c](double, int order) {
        Jet j(order);
        j.deriv(0) = c;
        return j;
    }, kMaxJetOrder, "const");
}

enum class BinOp { Add, Sub, Mul };

Element combine(const Element& l, const Element& r, BinOp op) {
    if (std::holds_alternative<Scalar>(l) && std::holds_alternative<Scalar>(r)) {
        Scalar a = std::get<Scalar>(l), b = std::get<Scalar>(r);
        switch (op) {
            case BinOp::Add: return a + b;
            case BinOp::Sub: return a - b;
            case BinOp::Mul: return a * b;
        }
    }
    // smooth result; scalars are lifted to constants
    bool lnum = std::holds_alternative<NumericFn>(l), rnum = std::holds_alternative<NumericFn>(r);
    if (!lnum && !rnum) {
        auto lift = [](const Element& e) -> SmoothElement {
            if (const auto* se = std::get_if<SmoothElement>(&e)) return *se;
            double c = real_part_checked(std::get<Scalar>(e), "scalar lift");
            return SmoothElement{Expr::constant(c), std::nullopt};
        };
        SmoothElement a = lift(l), b = lift(r);
        SmoothElement out;
        out.n = merge_bindings(a.n, b.n);
        switch (op) {
            case BinOp::Add: out.expr = Expr::add(a.expr, b.expr); break;
            case BinOp::Sub: out.expr = Expr::sub(a.expr, b.expr); break;
            case BinOp::Mul: out.expr = Expr::mul(a.expr, b.expr); break;
        }
        return out;
    }
    NumericFn a = to_numeric(l), b = to_numeric(r);
    int order_cap = std::min(a.max_order(), b.max_order());
    auto fn = [a, b, op](double x, int order) {
        Jet ja = a.jet_at(x, order), jb = b.jet_at(x, order);
        switch (op) {
            case BinOp::Add: return jet_add(ja, jb);
            case BinOp::Sub: return jet_sub(ja, jb);
            default: return jet_mul(ja, jb);
        }
    };
    return NumericFn(fn, order_cap, a.name() + (op == BinOp::Mul ? "*" : op == BinOp::Add ? "+" : "-") + b.name());
}

}  // namespace

Element element_add(const Element& l, const Element& r) { return combine(l, r, BinOp::Add); }
Element element_sub(const Element& l, const Element& r) { return combine(l, r, BinOp::Sub); }
Element element_mul(const Element& l, const Element& r) { return combine(l, r, BinOp::Mul); }

Element element_scalar_mul(Scalar lambda, const Element& e) {
    if (const auto* c = std::get_if<Scalar>(&e)) return lambda * *c;
    double lam = real_part_checked(lambda, "scalar multiple");
    if (const auto* se = std::get_if<SmoothElement>(&e))
        return SmoothElement{Expr::mul(Expr::constant(lam), se->expr), se->n};
    const auto& nf = std::get<NumericFn>(e);
    return NumericFn([nf, lam](double x, int order) { return jet_scale(lam, nf.jet_at(x, order)); },
                     nf.max_order(), nf.name());
}

Element element_derivative(const Element& e) {
    if (std::holds_alternative<Scalar>(e))
        throw TypeError("derivative of a scalar element");
    if (const auto* se = std::get_if<SmoothElement>(&e))
        return SmoothElement{d_dx(se->expr), se->n};
    const auto& nf = std::get<NumericFn>(e);
    return NumericFn([nf](double x, int order) { return jet_shift(nf.jet_at(x, order + 1)); },
                     nf.max_order() - 1, nf.name() + "'");
}

bool element_is_smooth(const Element& e) { return !std::holds_alternative<Scalar>(e); }

SeminormFamily SeminormFamily::absolute_value() {
    SeminormFamily p;
    p.kind_ = Kind::AbsoluteValue;
    return p;
}

SeminormFamily SeminormFamily::sup_derivatives(double points_per_unit) {
    SeminormFamily p;
    p.kind_ = Kind::SupDerivatives;
    p.density_ = points_per_unit;
    return p;
}

SeminormFamily SeminormFamily::sobolev(int order, double radius, double points_per_unit) {
    SeminormFamily p;
    p.kind_ = Kind::SobolevSupDerivatives;
    p.sobolev_order_ = order;
    p.sobolev_radius_ = radius;
    p.density_ = points_per_unit;
    return p;
}

namespace detail {

double sup_abs_derivatives(const std::function<Jet(double, int)>& jet_at, double radius,
                           int nu, double density, bool refine) {
    auto score = [&](double x) {
        Jet j = jet_at(x, nu);
        double s = 0;
        for (int a = 0; a <= nu; ++a) s = std::max(s, std::fabs(j.deriv(a)));
        return s;
    };
    if (radius <= 0) return score(0.0);

    struct Candidate {
        double x, span, value;
    };
    double best = 0;
    std::vector<Candidate> top;
    auto offer = [&](double x, double span) {
        double v = score(x);
        best = std::max(best, v);
        top.push_back({x, span, v});
    };

    long npts = static_cast<long>(std::ceil(2 * radius * density)) + 1;
    if (npts < 5) npts = 5;
    double h = 2 * radius / static_cast<double>(npts - 1);
    for (long i = 0; i < npts; ++i) offer(-radius + static_cast<double>(i) * h, h);

    // Geometric ladder toward 0: spikes of scaled families concentrate near
    // the origin at widths far below any fixed uniform grid. The cutoff is
    // absolute so that ladders for nested radii are nested point sets.
    offer(0.0, h);
    const double ladder_cutoff = 1e-12;
    const double step = std::pow(2.0, -0.25);
    for (double x = radius * step; x >= ladder_cutoff; x *= step) {
        offer(x, x * (1 - step));
        offer(-x, x * (1 - step));
    }

    if (refine && nu >= 0) {
        std::sort(top.begin(), top.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
        std::vector<Candidate> seeds;
        for (const auto& c : top) {
            bool close = false;
            for (const auto& s : seeds)
                if (std::fabs(s.x - c.x) <= 2 * std::max(s.span, c.span)) close = true;
            if (!close) seeds.push_back(c);
            if (seeds.size() == 4) break;
        }
        for (auto seed : seeds) {
            double cx = seed.x, span = seed.span;
            for (int round = 0; round < 4; ++round) {
                double lo = std::max(-radius, cx - span), hi = std::min(radius, cx + span);
                double bx = cx, bv = -1;
                for (int i = 0; i <= 16; ++i) {
                    double x = lo + (hi - lo) * static_cast<double>(i) / 16.0;
                    double v = score(x);
                    if (v > bv) {
                        bv = v;
                        bx = x;
                    }
                }
                best = std::max(best, bv);
                cx = bx;
                span = (hi - lo) / 6.0;
            }
        }
    }
    return best;
}

}  // namespace detail

double seminorm_eval(const SeminormFamily& p, int mu, int nu, const Element& f) {
    if (mu < 0 || nu < 0) throw TypeError("seminorm indices must be natural numbers");
    switch (p.kind()) {
        case SeminormFamily::Kind::AbsoluteValue:
            if (const auto* c = std::get_if<Scalar>(&f)) return std::abs(*c);
            throw TypeError("absolute-value seminorm applies to scalar elements only");
        case SeminormFamily::Kind::SupDerivatives: {
            if (const auto* c = std::get_if<Scalar>(&f)) return std::abs(*c);
            NumericFn nf = to_numeric(f);
            auto jf = [&nf](double x, int order) { return nf.jet_at(x, order); };
            return detail::sup_abs_derivatives(jf, static_cast<double>(mu), nu,
                                               p.grid_density(), true);
        }
        case SeminormFamily::Kind::SobolevSupDerivatives: {
            if (const auto* c = std::get_if<Scalar>(&f)) return std::abs(*c);
            NumericFn nf = to_numeric(f);
            auto jf = [&nf](double x, int order) { return nf.jet_at(x, order); };
            return detail::sup_abs_derivatives(jf, p.sobolev_radius(), p.sobolev_order(),
                                               p.grid_density(), true);
        }
    }
    throw TypeError("corrupt seminorm family");
}

bool check_seminorm_monotone(const SeminormFamily& p, const Element& f,
                             std::span<const std::pair<IndexPair, IndexPair>> pairs) {
    for (const auto& [lo, hi] : pairs) {
        if (lo.first > hi.first || lo.second > hi.second)
            throw TypeError("index pairs must be componentwise ordered");
        double a = seminorm_eval(p, lo.first, lo.second, f);
        double b = seminorm_eval(p, hi.first, hi.second, f);
        // tiny slack: the refinement stage may polish different local maxima
        // for the two index pairs
        if (a > b + 1e-9 * std::max(1.0, b)) return false;
    }
    return true;
}

}  // namespace gfa
