#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "gfa/errors.hpp"

namespace gfa {

enum class ExprOp {
    Constant,
    VarX,
    VarN,
    VarM,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over the symbols x (function argument),
/// n (sequence index) and m (family index). Trees are shared freely;
/// all operations produce new nodes.
class Expr {
public:
    ExprOp op;
    double value = 0.0;  // payload for Constant
    ExprPtr a, b;        // children; b is null for unary nodes

    bool uses_x = false, uses_n = false, uses_m = false;

    static ExprPtr constant(double v);
    static ExprPtr var_x();
    static ExprPtr var_n();
    static ExprPtr var_m();
    static ExprPtr add(ExprPtr l, ExprPtr r);
    static ExprPtr sub(ExprPtr l, ExprPtr r);
    static ExprPtr mul(ExprPtr l, ExprPtr r);
    static ExprPtr div(ExprPtr l, ExprPtr r);
    static ExprPtr neg(ExprPtr c);
    static ExprPtr pow(ExprPtr base, ExprPtr expo);
    static ExprPtr exp(ExprPtr c);
    static ExprPtr log(ExprPtr c);
    static ExprPtr sin(ExprPtr c);
    static ExprPtr cos(ExprPtr c);
    static ExprPtr sqrt(ExprPtr c);
};

/// Variable bindings for evaluation. Unbound symbols that occur in the tree
/// raise EvalError.
struct EvalEnv {
    double x = 0.0;
    bool has_x = true;
    std::optional<double> n;
    std::optional<double> m;
};

/// Parses the expression grammar used by scale definitions, sequence
/// generators and the experiment DSL:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := primary ('^' unary)?         right associative, tighter than '-'
///   primary:= NUMBER | x | n | m | pi | e | fn '(' expr ')' | '(' expr ')'
///   fn     := exp | log | sin | cos | sqrt
ExprPtr parse_expr(std::string_view src);

std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

/// Structural comparison (same shape, same constants).
bool expr_equal(const Expr& l, const Expr& r);

/// Derivative with respect to x. n and m are treated as constants.
ExprPtr d_dx(const ExprPtr& e);

namespace detail {

template <class T>
T eval_rec(const Expr& e, const EvalEnv& env) {
    auto guard_pos = [](T v, const char* what) {
        if (!(v > T(0))) throw EvalError(std::string(what) + " of non-positive value");
        return v;
    };
    switch (e.op) {
        case ExprOp::Constant: return T(e.value);
        case ExprOp::VarX:
            if (!env.has_x) throw EvalError("symbol x is not bound");
            return T(env.x);
        case ExprOp::VarN:
            if (!env.n) throw EvalError("symbol n is not bound");
            return T(*env.n);
        case ExprOp::VarM:
            if (!env.m) throw EvalError("symbol m is not bound");
            return T(*env.m);
        case ExprOp::Add: return eval_rec<T>(*e.a, env) + eval_rec<T>(*e.b, env);
        case ExprOp::Sub: return eval_rec<T>(*e.a, env) - eval_rec<T>(*e.b, env);
        case ExprOp::Mul: return eval_rec<T>(*e.a, env) * eval_rec<T>(*e.b, env);
        case ExprOp::Div: {
            T num = eval_rec<T>(*e.a, env), den = eval_rec<T>(*e.b, env);
            if (den == T(0)) throw EvalError("division by zero");
            return num / den;
        }
        case ExprOp::Neg: return -eval_rec<T>(*e.a, env);
        case ExprOp::Pow: {
            T base = eval_rec<T>(*e.a, env), expo = eval_rec<T>(*e.b, env);
            using std::floor;
            if (expo == floor(expo) && std::abs(double(expo)) < 1e9) {
                long k = static_cast<long>(double(expo));
                if (k < 0 && base == T(0)) throw EvalError("zero raised to a negative power");
                using std::pow;
                return pow(base, static_cast<int>(k));
            }
            guard_pos(base, "real power");
            using std::pow;
            return pow(base, expo);
        }
        case ExprOp::Exp: {
            using std::exp;
            return exp(eval_rec<T>(*e.a, env));
        }
        case ExprOp::Log: {
            using std::log;
            return log(guard_pos(eval_rec<T>(*e.a, env), "log"));
        }
        case ExprOp::Sin: {
            using std::sin;
            return sin(eval_rec<T>(*e.a, env));
        }
        case ExprOp::Cos: {
            using std::cos;
            return cos(eval_rec<T>(*e.a, env));
        }
        case ExprOp::Sqrt: {
            T v = eval_rec<T>(*e.a, env);
            if (v < T(0)) throw EvalError("sqrt of negative value");
            using std::sqrt;
            return sqrt(v);
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace detail

/// Scalar evaluation. The template parameter lets tests run the same tree in
/// extended precision.
template <class T = double>
T eval(const Expr& e, const EvalEnv& env) {
    return detail::eval_rec<T>(e, env);
}

template <class T = double>
T eval(const ExprPtr& e, const EvalEnv& env) {
    return detail::eval_rec<T>(*e, env);
}

}  // namespace gfa
