#include "gfa/jet.hpp"

#include <cmath>
#include <cstdlib>

#include "gfa/errors.hpp"

namespace gfa {

namespace {

// Truncated Taylor series around the evaluation point; c[k] = f^(k)/k!.
// The recurrences below are the standard coefficient propagation rules for
// composing elementary functions with a series argument.
struct Series {
    std::vector<double> c;

    explicit Series(int order) : c(static_cast<std::size_t>(order) + 1, 0.0) {}
    int order() const { return static_cast<int>(c.size()) - 1; }
    double& operator[](int k) { return c[static_cast<std::size_t>(k)]; }
    double operator[](int k) const { return c[static_cast<std::size_t>(k)]; }
};

Series s_const(double v, int order) {
    Series s(order);
    s[0] = v;
    return s;
}

Series s_var(double x0, int order) {
    Series s(order);
    s[0] = x0;
    if (order >= 1) s[1] = 1.0;
    return s;
}

Series s_add(const Series& a, const Series& b) {
    Series r(a.order());
    for (int k = 0; k <= r.order(); ++k) r[k] = a[k] + b[k];
    return r;
}

Series s_sub(const Series& a, const Series& b) {
    Series r(a.order());
    for (int k = 0; k <= r.order(); ++k) r[k] = a[k] - b[k];
    return r;
}

Series s_neg(const Series& a) {
    Series r(a.order());
    for (int k = 0; k <= r.order(); ++k) r[k] = -a[k];
    return r;
}

Series s_mul(const Series& a, const Series& b) {
    Series r(a.order());
    for (int k = 0; k <= r.order(); ++k) {
        double acc = 0;
        for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
        r[k] = acc;
    }
    return r;
}

Series s_div(const Series& a, const Series& b) {
    if (b[0] == 0.0) throw EvalError("division by zero");
    Series r(a.order());
    for (int k = 0; k <= r.order(); ++k) {
        double acc = a[k];
        for (int j = 0; j < k; ++j) acc -= r[j] * b[k - j];
        r[k] = acc / b[0];
    }
    return r;
}

Series s_exp(const Series& u) {
    Series v(u.order());
    v[0] = std::exp(u[0]);
    for (int k = 1; k <= v.order(); ++k) {
        double acc = 0;
        for (int j = 1; j <= k; ++j) acc += j * u[j] * v[k - j];
        v[k] = acc / k;
    }
    return v;
}

Series s_log(const Series& u) {
    if (u[0] <= 0.0) throw EvalError("log of non-positive value");
    Series v(u.order());
    v[0] = std::log(u[0]);
    for (int k = 1; k <= v.order(); ++k) {
        double acc = k * u[k];
        for (int j = 1; j < k; ++j) acc -= j * v[j] * u[k - j];
        v[k] = acc / (k * u[0]);
    }
    return v;
}

Series s_sqrt(const Series& u) {
    if (u[0] < 0.0) throw EvalError("sqrt of negative value");
    Series v(u.order());
    if (u[0] == 0.0) {
        if (v.order() >= 1) throw EvalError("sqrt derivatives at zero are singular");
        return v;
    }
    v[0] = std::sqrt(u[0]);
    for (int k = 1; k <= v.order(); ++k) {
        double acc = u[k];
        for (int j = 1; j < k; ++j) acc -= v[j] * v[k - j];
        v[k] = acc / (2.0 * v[0]);
    }
    return v;
}

void s_sincos(const Series& u, Series& s, Series& c) {
    s[0] = std::sin(u[0]);
    c[0] = std::cos(u[0]);
    for (int k = 1; k <= u.order(); ++k) {
        double sa = 0, ca = 0;
        for (int j = 1; j <= k; ++j) {
            sa += j * u[j] * c[k - j];
            ca += j * u[j] * s[k - j];
        }
        s[k] = sa / k;
        c[k] = -ca / k;
    }
}

Series s_pow_real(const Series& u, double r) {
    if (u[0] <= 0.0) throw EvalError("real power of non-positive base");
    Series v(u.order());
    v[0] = std::pow(u[0], r);
    for (int k = 1; k <= v.order(); ++k) {
        double acc = 0;
        for (int j = 1; j <= k; ++j) acc += r * j * u[j] * v[k - j];
        for (int j = 1; j < k; ++j) acc -= j * v[j] * u[k - j];
        v[k] = acc / (k * u[0]);
    }
    return v;
}

Series s_pow_int(const Series& u, long e) {
    int order = u.order();
    if (e == 0) return s_const(1.0, order);
    if (e < 0) {
        if (u[0] == 0.0) throw EvalError("zero raised to a negative power");
        return s_div(s_const(1.0, order), s_pow_int(u, -e));
    }
    // binary exponentiation keeps negative bases exact
    Series acc = s_const(1.0, order);
    Series base = u;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1UL) acc = s_mul(acc, base);
        base = s_mul(base, base);
        k >>= 1;
    }
    return acc;
}

Series eval_series(const Expr& e, double x, const EvalEnv& env, int order) {
    switch (e.op) {
        case ExprOp::Constant: return s_const(e.value, order);
        case ExprOp::VarX: return s_var(x, order);
        case ExprOp::VarN:
            if (!env.n) throw EvalError("symbol n is not bound");
            return s_const(*env.n, order);
        case ExprOp::VarM:
            if (!env.m) throw EvalError("symbol m is not bound");
            return s_const(*env.m, order);
        case ExprOp::Add: return s_add(eval_series(*e.a, x, env, order), eval_series(*e.b, x, env, order));
        case ExprOp::Sub: return s_sub(eval_series(*e.a, x, env, order), eval_series(*e.b, x, env, order));
        case ExprOp::Mul: return s_mul(eval_series(*e.a, x, env, order), eval_series(*e.b, x, env, order));
        case ExprOp::Div: return s_div(eval_series(*e.a, x, env, order), eval_series(*e.b, x, env, order));
        case ExprOp::Neg: return s_neg(eval_series(*e.a, x, env, order));
        case ExprOp::Pow: {
            Series base = eval_series(*e.a, x, env, order);
            if (!e.b->uses_x) {
                double expo = eval(*e.b, env);
                if (expo == std::floor(expo) && std::abs(expo) < 1e9)
                    return s_pow_int(base, static_cast<long>(expo));
                return s_pow_real(base, expo);
            }
            // x-dependent exponent: u^v = exp(v log u)
            Series expo = eval_series(*e.b, x, env, order);
            return s_exp(s_mul(expo, s_log(base)));
        }
        case ExprOp::Exp: return s_exp(eval_series(*e.a, x, env, order));
        case ExprOp::Log: return s_log(eval_series(*e.a, x, env, order));
        case ExprOp::Sin: {
            Series u = eval_series(*e.a, x, env, order);
            Series s(order), c(order);
            s_sincos(u, s, c);
            return s;
        }
        case ExprOp::Cos: {
            Series u = eval_series(*e.a, x, env, order);
            Series s(order), c(order);
            s_sincos(u, s, c);
            return c;
        }
        case ExprOp::Sqrt: return s_sqrt(eval_series(*e.a, x, env, order));
    }
    throw EvalError("corrupt expression node");
}

// exact in double up to 16!
double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    double b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

void check_order(int order) {
    if (order < 0) throw CapabilityError("jet order must be non-negative");
    if (order > kMaxJetOrder)
        throw CapabilityError("jet order " + std::to_string(order) + " exceeds supported maximum " +
                              std::to_string(kMaxJetOrder));
}

}  // namespace

Jet jet_eval(const Expr& e, double x, int order, std::optional<double> n, std::optional<double> m) {
    check_order(order);
    EvalEnv env;
    env.x = x;
    env.n = n;
    env.m = m;
    Series s = eval_series(e, x, env, order);
    Jet j(order);
    for (int k = 0; k <= order; ++k) j.deriv(k) = s[k] * factorial(k);
    return j;
}

Jet jet_add(const Jet& l, const Jet& r) {
    int order = std::min(l.order(), r.order());
    Jet out(order);
    for (int k = 0; k <= order; ++k) out.deriv(k) = l.deriv(k) + r.deriv(k);
    return out;
}

Jet jet_sub(const Jet& l, const Jet& r) {
    int order = std::min(l.order(), r.order());
    Jet out(order);
    for (int k = 0; k <= order; ++k) out.deriv(k) = l.deriv(k) - r.deriv(k);
    return out;
}

Jet jet_scale(double c, const Jet& j) {
    Jet out(j.order());
    for (int k = 0; k <= j.order(); ++k) out.deriv(k) = c * j.deriv(k);
    return out;
}

Jet jet_mul(const Jet& l, const Jet& r) {
    int order = std::min(l.order(), r.order());
    Jet out(order);
    for (int k = 0; k <= order; ++k) {
        double acc = 0;
        for (int j = 0; j <= k; ++j) acc += binomial(k, j) * l.deriv(j) * r.deriv(k - j);
        out.deriv(k) = acc;
    }
    return out;
}

Jet jet_shift(const Jet& j) {
    if (j.order() < 1) throw CapabilityError("jet has no derivative entries left");
    Jet out(j.order() - 1);
    for (int k = 0; k < j.order(); ++k) out.deriv(k) = j.deriv(k + 1);
    return out;
}

}  // namespace gfa
