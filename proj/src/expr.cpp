#include "gfa/expr.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <sstream>

namespace gfa {

namespace {

ExprPtr make(ExprOp op, double v, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->value = v;
    e->a = std::move(a);
    e->b = std::move(b);
    e->uses_x = (op == ExprOp::VarX) || (e->a && e->a->uses_x) || (e->b && e->b->uses_x);
    e->uses_n = (op == ExprOp::VarN) || (e->a && e->a->uses_n) || (e->b && e->b->uses_n);
    e->uses_m = (op == ExprOp::VarM) || (e->a && e->a->uses_m) || (e->b && e->b->uses_m);
    return e;
}

bool is_const(const ExprPtr& e, double v) {
    return e->op == ExprOp::Constant && e->value == v;
}

}  // namespace

ExprPtr Expr::constant(double v) { return make(ExprOp::Constant, v, nullptr, nullptr); }
ExprPtr Expr::var_x() { return make(ExprOp::VarX, 0, nullptr, nullptr); }
ExprPtr Expr::var_n() { return make(ExprOp::VarN, 0, nullptr, nullptr); }
ExprPtr Expr::var_m() { return make(ExprOp::VarM, 0, nullptr, nullptr); }

// The binary constructors fold the identities that show up constantly when
// differentiating; this keeps derivative trees readable and cheap to evaluate.
ExprPtr Expr::add(ExprPtr l, ExprPtr r) {
    if (is_const(l, 0)) return r;
    if (is_const(r, 0)) return l;
    if (l->op == ExprOp::Constant && r->op == ExprOp::Constant)
        return constant(l->value + r->value);
    return make(ExprOp::Add, 0, std::move(l), std::move(r));
}

ExprPtr Expr::sub(ExprPtr l, ExprPtr r) {
    if (is_const(r, 0)) return l;
    if (l->op == ExprOp::Constant && r->op == ExprOp::Constant)
        return constant(l->value - r->value);
    return make(ExprOp::Sub, 0, std::move(l), std::move(r));
}

ExprPtr Expr::mul(ExprPtr l, ExprPtr r) {
    if (is_const(l, 0) || is_const(r, 0)) return constant(0);
    if (is_const(l, 1)) return r;
    if (is_const(r, 1)) return l;
    if (l->op == ExprOp::Constant && r->op == ExprOp::Constant)
        return constant(l->value * r->value);
    return make(ExprOp::Mul, 0, std::move(l), std::move(r));
}

ExprPtr Expr::div(ExprPtr l, ExprPtr r) {
    if (is_const(l, 0) && !is_const(r, 0)) return constant(0);
    if (is_const(r, 1)) return l;
    return make(ExprOp::Div, 0, std::move(l), std::move(r));
}

ExprPtr Expr::neg(ExprPtr c) {
    if (c->op == ExprOp::Constant) return constant(-c->value);
    return make(ExprOp::Neg, 0, std::move(c), nullptr);
}

ExprPtr Expr::pow(ExprPtr base, ExprPtr expo) {
    if (is_const(expo, 1)) return base;
    if (is_const(expo, 0)) return constant(1);
    return make(ExprOp::Pow, 0, std::move(base), std::move(expo));
}

ExprPtr Expr::exp(ExprPtr c) { return make(ExprOp::Exp, 0, std::move(c), nullptr); }
ExprPtr Expr::log(ExprPtr c) { return make(ExprOp::Log, 0, std::move(c), nullptr); }
ExprPtr Expr::sin(ExprPtr c) { return make(ExprOp::Sin, 0, std::move(c), nullptr); }
ExprPtr Expr::cos(ExprPtr c) { return make(ExprOp::Cos, 0, std::move(c), nullptr); }
ExprPtr Expr::sqrt(ExprPtr c) { return make(ExprOp::Sqrt, 0, std::move(c), nullptr); }

bool expr_equal(const Expr& l, const Expr& r) {
    if (l.op != r.op) return false;
    if (l.op == ExprOp::Constant) return l.value == r.value;
    if ((l.a == nullptr) != (r.a == nullptr)) return false;
    if ((l.b == nullptr) != (r.b == nullptr)) return false;
    if (l.a && !expr_equal(*l.a, *r.a)) return false;
    if (l.b && !expr_equal(*l.b, *r.b)) return false;
    return true;
}

// ---------------------------------------------------------------- parsing --

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr run() {
        auto e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ExprParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr expr() {
        auto l = term();
        for (;;) {
            if (eat('+')) l = Expr::add(l, term());
            else if (eat('-')) l = Expr::sub(l, term());
            else return l;
        }
    }

    ExprPtr term() {
        auto l = unary();
        for (;;) {
            if (eat('*')) l = Expr::mul(l, unary());
            else if (eat('/')) l = Expr::div(l, unary());
            else return l;
        }
    }

    // '^' binds tighter than unary minus, so -x^2 means -(x^2); the exponent
    // may itself start with '-' as in x^-2.
    ExprPtr unary() {
        if (eat('-')) return Expr::neg(unary());
        return power();
    }

    ExprPtr power() {
        auto base = primary();
        if (eat('^')) return Expr::pow(base, unary());
        return base;
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ExprParseError("unexpected end of expression", pos_);
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return word();
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!eat(')')) throw ExprParseError("expected ')'", pos_);
            return e;
        }
        throw ExprParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr number() {
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        double v = 0;
        auto [end, ec] = std::from_chars(first, last, v);
        if (ec != std::errc())
            throw ExprParseError("malformed number", pos_);
        pos_ = static_cast<std::size_t>(end - src_.data());
        return Expr::constant(v);
    }

    ExprPtr word() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string_view w = src_.substr(start, pos_ - start);
        if (w == "x") return Expr::var_x();
        if (w == "n") return Expr::var_n();
        if (w == "m") return Expr::var_m();
        if (w == "pi") return Expr::constant(std::numbers::pi);
        if (w == "e") return Expr::constant(std::numbers::e);
        if (w == "exp" || w == "log" || w == "sin" || w == "cos" || w == "sqrt") {
            if (!eat('(')) throw ExprParseError("expected '(' after function name", pos_);
            auto arg = expr();
            if (!eat(')')) throw ExprParseError("expected ')'", pos_);
            if (w == "exp") return Expr::exp(arg);
            if (w == "log") return Expr::log(arg);
            if (w == "sin") return Expr::sin(arg);
            if (w == "cos") return Expr::cos(arg);
            return Expr::sqrt(arg);
        }
        throw ExprParseError("unknown identifier '" + std::string(w) + "'", start);
    }
};

int precedence(ExprOp op) {
    switch (op) {
        case ExprOp::Add:
        case ExprOp::Sub: return 1;
        case ExprOp::Mul:
        case ExprOp::Div: return 2;
        case ExprOp::Neg: return 3;
        case ExprOp::Pow: return 4;
        default: return 5;
    }
}

void print(std::ostringstream& out, const Expr& e, int parent_prec, bool right_side) {
    int prec = precedence(e.op);
    bool need_parens = prec < parent_prec ||
                       (prec == parent_prec && right_side && prec <= 2);
    if (need_parens) out << '(';
    switch (e.op) {
        case ExprOp::Constant: {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, e.value);
            out << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
            break;
        }
        case ExprOp::VarX: out << 'x'; break;
        case ExprOp::VarN: out << 'n'; break;
        case ExprOp::VarM: out << 'm'; break;
        case ExprOp::Add: print(out, *e.a, prec, false); out << " + "; print(out, *e.b, prec, true); break;
        case ExprOp::Sub: print(out, *e.a, prec, false); out << " - "; print(out, *e.b, prec, true); break;
        case ExprOp::Mul: print(out, *e.a, prec, false); out << "*"; print(out, *e.b, prec, true); break;
        case ExprOp::Div: print(out, *e.a, prec, false); out << "/"; print(out, *e.b, prec, true); break;
        case ExprOp::Neg: out << '-'; print(out, *e.a, prec + 1, false); break;
        case ExprOp::Pow: print(out, *e.a, prec + 1, false); out << '^'; print(out, *e.b, prec, false); break;
        case ExprOp::Exp: out << "exp("; print(out, *e.a, 0, false); out << ')'; break;
        case ExprOp::Log: out << "log("; print(out, *e.a, 0, false); out << ')'; break;
        case ExprOp::Sin: out << "sin("; print(out, *e.a, 0, false); out << ')'; break;
        case ExprOp::Cos: out << "cos("; print(out, *e.a, 0, false); out << ')'; break;
        case ExprOp::Sqrt: out << "sqrt("; print(out, *e.a, 0, false); out << ')'; break;
    }
    if (need_parens) out << ')';
}

}  // namespace

ExprPtr parse_expr(std::string_view src) { return Parser(src).run(); }

std::string to_string(const Expr& e) {
    std::ostringstream out;
    print(out, e, 0, false);
    return out.str();
}

// ---------------------------------------------------------- differentiation --

ExprPtr d_dx(const ExprPtr& e) {
    if (!e->uses_x) return Expr::constant(0);
    switch (e->op) {
        case ExprOp::VarX: return Expr::constant(1);
        case ExprOp::Add: return Expr::add(d_dx(e->a), d_dx(e->b));
        case ExprOp::Sub: return Expr::sub(d_dx(e->a), d_dx(e->b));
        case ExprOp::Mul:
            return Expr::add(Expr::mul(d_dx(e->a), e->b), Expr::mul(e->a, d_dx(e->b)));
        case ExprOp::Div:
            // (u/v)' = u'/v - u v'/v^2
            return Expr::sub(Expr::div(d_dx(e->a), e->b),
                             Expr::div(Expr::mul(e->a, d_dx(e->b)),
                                       Expr::mul(e->b, e->b)));
        case ExprOp::Neg: return Expr::neg(d_dx(e->a));
        case ExprOp::Pow: {
            if (!e->b->uses_x) {
                // (u^c)' = c u^(c-1) u'
                auto cm1 = Expr::sub(e->b, Expr::constant(1));
                return Expr::mul(Expr::mul(e->b, Expr::pow(e->a, cm1)), d_dx(e->a));
            }
            // general case via u^v = exp(v log u)
            auto logu = Expr::log(e->a);
            auto inner = Expr::add(Expr::mul(d_dx(e->b), logu),
                                   Expr::mul(e->b, Expr::div(d_dx(e->a), e->a)));
            return Expr::mul(Expr::pow(e->a, e->b), inner);
        }
        case ExprOp::Exp: return Expr::mul(Expr::exp(e->a), d_dx(e->a));
        case ExprOp::Log: return Expr::div(d_dx(e->a), e->a);
        case ExprOp::Sin: return Expr::mul(Expr::cos(e->a), d_dx(e->a));
        case ExprOp::Cos: return Expr::neg(Expr::mul(Expr::sin(e->a), d_dx(e->a)));
        case ExprOp::Sqrt:
            // (sqrt u)' = u' / (2 sqrt u)
            return Expr::div(d_dx(e->a), Expr::mul(Expr::constant(2), Expr::sqrt(e->a)));
        default: return Expr::constant(0);  // Constant, VarN, VarM
    }
}

}  // namespace gfa
