#include "gfa/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "gfa/errors.hpp"

namespace gfa {

namespace {

std::string num_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

enum class Tok { Ident, Number, String, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // ident form / string contents
    double num = 0;
    char sym = 0;
    SrcSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

struct LexResult {
    std::vector<Token> tokens;
    std::optional<ParseDiagnostic> fatal;
};

LexResult lex(std::string_view src) {
    LexResult out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto make_span = [&](std::size_t start, int sl, int sc) {
        SrcSpan sp;
        sp.line = sl;
        sp.col = sc;
        sp.offset = static_cast<int>(start);
        sp.length = static_cast<int>(i - start);
        return sp;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i;
        int sl = line, sc = col;
        if (ident_start(c)) {
            ++i;
            while (i < src.size() &&
                   (ident_char(src[i]) ||
                    (src[i] == '-' && i + 1 < src.size() && ident_start(src[i + 1]))))
                ++i;
            Token t;
            t.kind = Tok::Ident;
            t.text = std::string(src.substr(start, i - start));
            t.span = make_span(start, sl, sc);
            col += static_cast<int>(i - start);
            out.tokens.push_back(std::move(t));
            continue;
        }
        if (digit(c) || (c == '-' && i + 1 < src.size() &&
                         (digit(src[i + 1]) || src[i + 1] == '.')) ||
            (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
            ++i;
            while (i < src.size() && (digit(src[i]) || src[i] == '.')) ++i;
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && digit(src[j])) {
                    i = j;
                    while (i < src.size() && digit(src[i])) ++i;
                }
            }
            Token t;
            t.kind = Tok::Number;
            t.text = std::string(src.substr(start, i - start));
            auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.num);
            t.span = make_span(start, sl, sc);
            col += static_cast<int>(i - start);
            if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
                out.fatal = ParseDiagnostic{t.span, Severity::Fatal,
                                            "malformed number " + t.text, ""};
                return out;
            }
            out.tokens.push_back(std::move(t));
            continue;
        }
        if (c == '"') {
            ++i;
            std::size_t body = i;
            while (i < src.size() && src[i] != '"' && src[i] != '\n') ++i;
            if (i >= src.size() || src[i] != '"') {
                SrcSpan sp;
                sp.line = sl;
                sp.col = sc;
                sp.offset = static_cast<int>(start);
                sp.length = static_cast<int>(i - start);
                out.fatal =
                    ParseDiagnostic{sp, Severity::Fatal, "unterminated string", ""};
                return out;
            }
            Token t;
            t.kind = Tok::String;
            t.text = std::string(src.substr(body, i - body));
            ++i;  // closing quote
            t.span = make_span(start, sl, sc);
            col += static_cast<int>(i - start);
            out.tokens.push_back(std::move(t));
            continue;
        }
        if (std::string_view("=;[]{}:,").find(c) != std::string_view::npos) {
            ++i;
            Token t;
            t.kind = Tok::Sym;
            t.sym = c;
            t.text = std::string(1, c);
            t.span = make_span(start, sl, sc);
            ++col;
            out.tokens.push_back(std::move(t));
            continue;
        }
        SrcSpan sp;
        sp.line = sl;
        sp.col = sc;
        sp.offset = static_cast<int>(start);
        sp.length = 1;
        out.fatal = ParseDiagnostic{sp, Severity::Fatal,
                                    std::string("unexpected character '") + c + "'", ""};
        return out;
    }
    Token end;
    end.kind = Tok::End;
    end.span.line = line;
    end.span.col = col;
    end.span.offset = static_cast<int>(src.size());
    end.span.length = 0;
    out.tokens.push_back(std::move(end));
    return out;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

enum class NameKind { Seq, Scale, Family, Mollifier, Seminorm };

const char* kind_word(NameKind k) {
    switch (k) {
        case NameKind::Seq: return "sequence";
        case NameKind::Scale: return "scale";
        case NameKind::Family: return "family";
        case NameKind::Mollifier: return "mollifier";
        case NameKind::Seminorm: return "seminorm";
    }
    return "name";
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ParseResult run() {
        while (!fatal_ && peek().kind != Tok::End) statement();
        ParseResult out;
        out.diagnostics = std::move(diags_);
        if (!fatal_) out.spec = std::move(spec_);
        return out;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ExperimentSpec spec_;
    std::vector<ParseDiagnostic> diags_;
    bool fatal_ = false;
    std::map<std::string, NameKind> names_;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    void error(const SrcSpan& span, std::string msg, std::string suggestion = "") {
        diags_.push_back({span, Severity::Error, std::move(msg), std::move(suggestion)});
    }
    void fatal(const SrcSpan& span, std::string msg) {
        diags_.push_back({span, Severity::Fatal, std::move(msg), ""});
        fatal_ = true;
    }

    bool at_ident(const char* word) const {
        return peek().kind == Tok::Ident && peek().text == word;
    }
    bool eat_ident(const char* word) {
        if (!at_ident(word)) return false;
        advance();
        return true;
    }
    bool expect_sym(char c) {
        if (peek().kind == Tok::Sym && peek().sym == c) {
            advance();
            return true;
        }
        fatal(peek().span, std::string("expected '") + c + "'");
        return false;
    }
    std::optional<Token> expect_ident(const char* what) {
        if (peek().kind == Tok::Ident) return advance();
        fatal(peek().span, std::string("expected ") + what);
        return std::nullopt;
    }
    std::optional<Token> expect_number() {
        if (peek().kind == Tok::Number) return advance();
        fatal(peek().span, "expected a number");
        return std::nullopt;
    }
    std::optional<Token> expect_string(const char* what) {
        if (peek().kind == Tok::String) return advance();
        fatal(peek().span, std::string("expected ") + what);
        return std::nullopt;
    }
    std::optional<long> expect_int() {
        auto t = expect_number();
        if (!t) return std::nullopt;
        double v = t->num;
        if (v != std::floor(v) || std::fabs(v) > 1e15) {
            error(t->span, "expected an integer");
            return std::nullopt;
        }
        return static_cast<long>(v);
    }

    void skip_statement() {
        while (peek().kind != Tok::End && !(peek().kind == Tok::Sym && peek().sym == ';'))
            advance();
        if (peek().kind != Tok::End) advance();
    }

    std::string nearest(const std::string& name) const {
        std::string best;
        int best_d = 3;
        for (const auto& [known, kind] : names_) {
            (void)kind;
            int d = edit_distance(name, known);
            if (d < best_d) {
                best_d = d;
                best = known;
            }
        }
        return best;
    }

    // resolution failures are reported but do not stop the parse
    bool resolve(const Token& t, NameKind want) {
        auto it = names_.find(t.text);
        if (it == names_.end()) {
            std::string close = nearest(t.text);
            error(t.span, "unknown name " + t.text,
                  close.empty() ? "" : "did you mean '" + close + "'?");
            return false;
        }
        if (it->second != want) {
            error(t.span, t.text + " is not a " + kind_word(want));
            return false;
        }
        return true;
    }

    void declare(const Token& name, NameKind kind) {
        auto [it, inserted] = names_.emplace(name.text, kind);
        (void)it;
        if (!inserted) error(name.span, "duplicate name " + name.text);
    }

    // expression inside a string literal; error spans point into the string body
    ExprPtr parse_expr_string(const Token& str) {
        try {
            return parse_expr(str.text);
        } catch (const ExprParseError& e) {
            SrcSpan sp = str.span;
            sp.offset += 1 + static_cast<int>(e.pos);
            sp.col += 1 + static_cast<int>(e.pos);
            sp.length = 1;
            error(sp, e.what());
            return nullptr;
        }
    }

    void statement() {
        if (eat_ident("seq")) return seq_decl();
        if (eat_ident("scale")) return scale_decl();
        if (eat_ident("family")) return family_decl();
        if (eat_ident("mollifier")) return mollifier_decl();
        if (eat_ident("seminorm")) return seminorm_decl();
        if (eat_ident("task")) return task_stmt();
        fatal(peek().span, "expected a declaration or task");
    }

    void seq_decl() {
        auto name = expect_ident("a sequence name");
        if (!name || !expect_sym('=')) return;
        SeqDecl d;
        d.name = name->text;
        d.span = name->span;
        bool valid = true;
        if (peek().kind == Tok::String) {
            Token str = advance();
            ExprInit init;
            init.expr = parse_expr_string(str);
            if (!init.expr)
                valid = false;
            else if (init.expr->uses_m) {
                error(str.span, "sequence expression may not use m");
                valid = false;
            }
            if (eat_ident("from")) {
                if (auto v = expect_int()) {
                    init.from = *v;
                    if (init.from < 1) error(str.span, "domain start must be at least 1");
                } else
                    valid = false;
            }
            if (eat_ident("certify")) {
                CertParams c;
                bool any = false;
                while (peek().kind == Tok::Ident && peek().text.size() == 1 &&
                       std::string("Cabst").find(peek().text[0]) != std::string::npos &&
                       peek(1).kind == Tok::Sym && peek(1).sym == '=') {
                    char field = advance().text[0];
                    advance();  // '='
                    auto v = expect_number();
                    if (!v) return;
                    any = true;
                    switch (field) {
                        case 'C': c.C = v->num; break;
                        case 'a': c.a = v->num; break;
                        case 'b': c.b = v->num; break;
                        case 's': c.s = v->num; break;
                        case 't': c.t = v->num; break;
                    }
                }
                if (!any) {
                    error(peek().span, "certify needs at least one field assignment");
                    valid = false;
                } else
                    init.cert = c;
            }
            d.init = std::move(init);
        } else if (eat_ident("delta")) {
            auto m = expect_ident("a mollifier name");
            if (!m) return;
            if (!resolve(*m, NameKind::Mollifier)) valid = false;
            d.init = DeltaInit{m->text};
        } else if (eat_ident("embed")) {
            if (eat_ident("const")) {
                auto str = expect_string("an expression string");
                if (!str) return;
                EmbedConstInit init;
                init.expr = parse_expr_string(*str);
                if (!init.expr)
                    valid = false;
                else if (init.expr->uses_n || init.expr->uses_m) {
                    error(str->span, "embedded constant may not depend on n");
                    valid = false;
                }
                d.init = std::move(init);
            } else if (eat_ident("conv")) {
                EmbedConvInit init;
                if (eat_ident("heaviside")) {
                    init.heaviside = true;
                } else {
                    auto str = expect_string("an expression string or heaviside");
                    if (!str) return;
                    init.fexpr = parse_expr_string(*str);
                    if (!init.fexpr)
                        valid = false;
                    else if (init.fexpr->uses_n || init.fexpr->uses_m) {
                        error(str->span, "convolution argument may only use x");
                        valid = false;
                    }
                }
                auto m = expect_ident("a mollifier name");
                if (!m) return;
                if (!resolve(*m, NameKind::Mollifier)) valid = false;
                init.mollifier = m->text;
                d.init = std::move(init);
            } else {
                fatal(peek().span, "expected const or conv after embed");
                return;
            }
        } else if (at_ident("add") || at_ident("sub") || at_ident("mul")) {
            std::string op = advance().text;
            auto a = expect_ident("a sequence name");
            if (!a) return;
            auto b = expect_ident("a sequence name");
            if (!b) return;
            if (!resolve(*a, NameKind::Seq)) valid = false;
            if (!resolve(*b, NameKind::Seq)) valid = false;
            CombineInit init;
            init.op = op == "add" ? '+' : op == "sub" ? '-' : '*';
            init.a = a->text;
            init.b = b->text;
            d.init = init;
        } else if (eat_ident("dx")) {
            auto a = expect_ident("a sequence name");
            if (!a) return;
            if (!resolve(*a, NameKind::Seq)) valid = false;
            d.init = DxInit{a->text};
        } else {
            fatal(peek().span, "expected a sequence initializer");
            return;
        }
        if (!expect_sym(';')) return;
        declare(*name, NameKind::Seq);
        if (valid) spec_.seqs.push_back(std::move(d));
    }

    void scale_decl() {
        auto name = expect_ident("a scale name");
        if (!name || !expect_sym('=')) return;
        ScaleDecl d;
        d.name = name->text;
        d.span = name->span;
        bool valid = true;
        if (eat_ident("log")) {
            d.ref = LogScaleRef{};
        } else if (eat_ident("power")) {
            auto v = expect_number();
            if (!v) return;
            if (!(v->num > 0)) {
                error(v->span, "power scale parameter must be positive");
                valid = false;
            }
            d.ref = PowerScaleRef{v->num};
        } else if (eat_ident("egorov")) {
            auto t = peek();
            auto v = expect_int();
            if (!v) return;
            if (*v < 0) {
                error(t.span, "egorov scale parameter must be a natural number");
                valid = false;
            }
            d.ref = EgorovScaleRef{*v};
        } else if (eat_ident("custom")) {
            auto str = expect_string("an expression string");
            if (!str) return;
            CustomScaleRef ref;
            ref.expr = parse_expr_string(*str);
            if (!ref.expr)
                valid = false;
            else if (ref.expr->uses_x || ref.expr->uses_m) {
                error(str->span, "custom scale expression may only use n");
                valid = false;
            }
            if (eat_ident("from")) {
                if (auto v = expect_int()) {
                    ref.from = *v;
                    if (ref.from < 1) error(str->span, "domain start must be at least 1");
                } else
                    return;
            }
            d.ref = std::move(ref);
        } else if (eat_ident("asymptotic")) {
            auto str = expect_string("an expression string");
            if (!str) return;
            AsymScaleRef ref;
            ref.expr = parse_expr_string(*str);
            if (!ref.expr)
                valid = false;
            else if (ref.expr->uses_x) {
                error(str->span, "asymptotic family expression may only use n and m");
                valid = false;
            } else if (!ref.expr->uses_n) {
                error(str->span, "asymptotic family expression must depend on n");
                valid = false;
            }
            if (!eat_ident("at")) {
                fatal(peek().span, "expected 'at' with the family index");
                return;
            }
            auto v = expect_int();
            if (!v) return;
            ref.at_m = static_cast<int>(*v);
            d.ref = std::move(ref);
        } else {
            fatal(peek().span, "expected a scale kind");
            return;
        }
        if (!expect_sym(';')) return;
        declare(*name, NameKind::Scale);
        if (valid) spec_.scales.push_back(std::move(d));
    }

    void family_decl() {
        auto name = expect_ident("a family name");
        if (!name || !expect_sym('=')) return;
        FamilyDecl d;
        d.name = name->text;
        d.span = name->span;
        bool valid = true;
        auto check_count = [&](const Token& at, long count) {
            if (count < 2 || count > 12) {
                error(at.span, "family level count must be between 2 and 12");
                valid = false;
            }
        };
        if (eat_ident("power")) {
            PowerFamilyRef ref;
            if (peek().kind == Tok::Number) {
                Token at = peek();
                auto v = expect_int();
                if (!v) return;
                ref.count = static_cast<int>(*v);
                check_count(at, *v);
            }
            d.ref = ref;
        } else if (eat_ident("egorov")) {
            EgorovFamilyRef ref;
            if (peek().kind == Tok::Number) {
                Token at = peek();
                auto v = expect_int();
                if (!v) return;
                ref.count = static_cast<int>(*v);
                check_count(at, *v);
            }
            d.ref = ref;
        } else if (eat_ident("asymptotic")) {
            auto str = expect_string("an expression string");
            if (!str) return;
            AsymFamilyRef ref;
            ref.expr = parse_expr_string(*str);
            if (!ref.expr)
                valid = false;
            else if (ref.expr->uses_x) {
                error(str->span, "asymptotic family expression may only use n and m");
                valid = false;
            } else if (!ref.expr->uses_n) {
                error(str->span, "asymptotic family expression must depend on n");
                valid = false;
            }
            if (eat_ident("from")) {
                auto lo = expect_int();
                if (!lo) return;
                if (!eat_ident("to")) {
                    fatal(peek().span, "expected 'to' with the upper index");
                    return;
                }
                auto hi = expect_int();
                if (!hi) return;
                ref.m_lo = static_cast<int>(*lo);
                ref.m_hi = static_cast<int>(*hi);
                if (*hi < *lo || *hi - *lo + 1 > 25 || std::labs(*lo) > 12 ||
                    std::labs(*hi) > 12) {
                    error(str->span, "family level range must stay within |m| <= 12");
                    valid = false;
                }
            }
            d.ref = std::move(ref);
        } else {
            fatal(peek().span, "expected a family kind");
            return;
        }
        if (!expect_sym(';')) return;
        declare(*name, NameKind::Family);
        if (valid) spec_.families.push_back(std::move(d));
    }

    void mollifier_decl() {
        auto name = expect_ident("a mollifier name");
        if (!name || !expect_sym('=')) return;
        MollifierDecl d;
        d.name = name->text;
        d.span = name->span;
        if (eat_ident("gaussian"))
            d.kind = MollifierKind::Gaussian;
        else if (eat_ident("bump"))
            d.kind = MollifierKind::Bump;
        else {
            fatal(peek().span, "unknown mollifier kind");
            return;
        }
        if (!expect_sym(';')) return;
        declare(*name, NameKind::Mollifier);
        spec_.mollifiers.push_back(std::move(d));
    }

    void seminorm_decl() {
        auto name = expect_ident("a seminorm name");
        if (!name || !expect_sym('=')) return;
        SeminormDecl d;
        d.name = name->text;
        d.span = name->span;
        bool valid = true;
        if (eat_ident("abs")) {
            d.ref = AbsSeminormRef{};
        } else if (eat_ident("supderiv")) {
            d.ref = SupSeminormRef{};
        } else if (eat_ident("sobolev")) {
            Token at = peek();
            auto order = expect_int();
            if (!order) return;
            auto radius = expect_number();
            if (!radius) return;
            if (*order < 0 || *order > 16) {
                error(at.span, "sobolev order must be between 0 and 16");
                valid = false;
            }
            if (!(radius->num > 0)) {
                error(radius->span, "sobolev radius must be positive");
                valid = false;
            }
            d.ref = SobolevSeminormRef{static_cast<int>(*order), radius->num};
        } else {
            fatal(peek().span, "expected a seminorm kind");
            return;
        }
        if (!expect_sym(';')) return;
        declare(*name, NameKind::Seminorm);
        if (valid) spec_.seminorms.push_back(std::move(d));
    }

    std::optional<QuantMode> try_mode() {
        if (eat_ident("projective")) return QuantMode::Projective;
        if (eat_ident("inductive")) return QuantMode::Inductive;
        return std::nullopt;
    }

    struct Opts {
        std::optional<std::string> seminorm;
        std::optional<int> mu, nu, m_budget;
        bool ok = true;
    };

    Opts parse_opts() {
        Opts o;
        for (;;) {
            if (eat_ident("with")) {
                auto p = expect_ident("a seminorm name");
                if (!p) {
                    o.ok = false;
                    return o;
                }
                if (!resolve(*p, NameKind::Seminorm)) o.ok = false;
                o.seminorm = p->text;
            } else if (at_ident("mu")) {
                Token at = peek(1);
                advance();
                auto v = expect_int();
                if (!v) {
                    o.ok = false;
                    return o;
                }
                if (*v < 1 || *v > 8) {
                    error(at.span, "mu budget must be between 1 and 8");
                    o.ok = false;
                }
                o.mu = static_cast<int>(*v);
            } else if (at_ident("nu")) {
                Token at = peek(1);
                advance();
                auto v = expect_int();
                if (!v) {
                    o.ok = false;
                    return o;
                }
                if (*v < 0 || *v > 8) {
                    error(at.span, "nu budget must be between 0 and 8");
                    o.ok = false;
                }
                o.nu = static_cast<int>(*v);
            } else if (at_ident("m_budget")) {
                Token at = peek(1);
                advance();
                auto v = expect_int();
                if (!v) {
                    o.ok = false;
                    return o;
                }
                if (*v < 1 || *v > 12) {
                    error(at.span, "m budget must be between 1 and 12");
                    o.ok = false;
                }
                o.m_budget = static_cast<int>(*v);
            } else {
                return o;
            }
        }
    }

    void task_stmt() {
        if (peek().kind != Tok::Ident) {
            fatal(peek().span, "expected a task kind");
            return;
        }
        Token kind = advance();
        bool valid = true;
        if (kind.text == "classify" || kind.text == "equal" || kind.text == "embed-check" ||
            kind.text == "family") {
            int name_count = (kind.text == "equal") ? 3 : 2;
            std::vector<Token> args;
            for (int i = 0; i < name_count; ++i) {
                auto t = expect_ident("a declared name");
                if (!t) return;
                args.push_back(*t);
            }
            auto mode = try_mode();
            Opts o = parse_opts();
            if (!o.ok) valid = false;
            if (!expect_sym(';')) return;
            if (kind.text == "classify") {
                ClassifyTask t;
                t.span = kind.span;
                t.seq = args[0].text;
                t.scale = args[1].text;
                if (!resolve(args[0], NameKind::Seq)) valid = false;
                if (!resolve(args[1], NameKind::Scale)) valid = false;
                if (mode) t.mode = *mode;
                t.seminorm = o.seminorm;
                if (o.mu) t.mu = *o.mu;
                if (o.nu) t.nu = *o.nu;
                if (valid) spec_.tasks.push_back(std::move(t));
            } else if (kind.text == "equal") {
                EqualTask t;
                t.span = kind.span;
                t.a = args[0].text;
                t.b = args[1].text;
                t.scale = args[2].text;
                if (!resolve(args[0], NameKind::Seq)) valid = false;
                if (!resolve(args[1], NameKind::Seq)) valid = false;
                if (!resolve(args[2], NameKind::Scale)) valid = false;
                if (mode) t.mode = *mode;
                t.seminorm = o.seminorm;
                if (o.mu) t.mu = *o.mu;
                if (o.nu) t.nu = *o.nu;
                if (valid) spec_.tasks.push_back(std::move(t));
            } else if (kind.text == "embed-check") {
                EmbedCheckTask t;
                t.span = kind.span;
                t.seq = args[0].text;
                t.scale = args[1].text;
                if (!resolve(args[0], NameKind::Seq)) valid = false;
                if (!resolve(args[1], NameKind::Scale)) valid = false;
                if (mode) t.mode = *mode;
                t.seminorm = o.seminorm;
                if (o.mu) t.mu = *o.mu;
                if (o.nu) t.nu = *o.nu;
                if (valid) spec_.tasks.push_back(std::move(t));
            } else {
                FamilyTask t;
                t.span = kind.span;
                t.seq = args[0].text;
                t.family = args[1].text;
                if (!resolve(args[0], NameKind::Seq)) valid = false;
                if (!resolve(args[1], NameKind::Family)) valid = false;
                if (mode) t.mode = *mode;
                t.seminorm = o.seminorm;
                if (o.mu) t.mu = *o.mu;
                if (o.nu) t.nu = *o.nu;
                if (o.m_budget) t.m_budget = *o.m_budget;
                if (valid) spec_.tasks.push_back(std::move(t));
            }
        } else if (kind.text == "distance") {
            std::vector<Token> args;
            for (int i = 0; i < 3; ++i) {
                auto t = expect_ident("a declared name");
                if (!t) return;
                args.push_back(*t);
            }
            Opts o = parse_opts();
            if (!o.ok) valid = false;
            if (!expect_sym(';')) return;
            DistanceTask t;
            t.span = kind.span;
            t.a = args[0].text;
            t.b = args[1].text;
            t.scale = args[2].text;
            if (!resolve(args[0], NameKind::Seq)) valid = false;
            if (!resolve(args[1], NameKind::Seq)) valid = false;
            if (!resolve(args[2], NameKind::Scale)) valid = false;
            t.seminorm = o.seminorm;
            if (o.mu) t.mu = *o.mu;
            if (o.nu) t.nu = *o.nu;
            if (valid) spec_.tasks.push_back(std::move(t));
        } else if (kind.text == "cauchy") {
            CauchyTask t;
            t.span = kind.span;
            if (!expect_sym('{')) return;
            if (!eat_ident("members")) {
                fatal(peek().span, "expected members");
                return;
            }
            if (!expect_sym(':') || !expect_sym('[')) return;
            for (;;) {
                auto m = expect_ident("a sequence name");
                if (!m) return;
                if (!resolve(*m, NameKind::Seq)) valid = false;
                t.members.push_back(m->text);
                if (peek().kind == Tok::Sym && peek().sym == ',') {
                    advance();
                    continue;
                }
                break;
            }
            if (!expect_sym(']')) return;
            if (!expect_sym(',')) return;
            if (!eat_ident("mu_max")) {
                fatal(peek().span, "expected mu_max");
                return;
            }
            if (!expect_sym(':')) return;
            Token at = peek();
            auto v = expect_int();
            if (!v) return;
            if (*v < 1 || *v > 8) {
                error(at.span, "mu_max must be between 1 and 8");
                valid = false;
            }
            t.mu_max = static_cast<int>(*v);
            if (!expect_sym(',')) return;
            if (!eat_ident("scale")) {
                fatal(peek().span, "expected scale");
                return;
            }
            if (!expect_sym(':')) return;
            auto sc = expect_ident("a scale name");
            if (!sc) return;
            if (!resolve(*sc, NameKind::Scale)) valid = false;
            t.scale = sc->text;
            if (peek().kind == Tok::Sym && peek().sym == ',') {
                advance();
                if (!eat_ident("seminorm")) {
                    fatal(peek().span, "expected seminorm");
                    return;
                }
                if (!expect_sym(':')) return;
                auto p = expect_ident("a seminorm name");
                if (!p) return;
                if (!resolve(*p, NameKind::Seminorm)) valid = false;
                t.seminorm = p->text;
            }
            if (!expect_sym('}')) return;
            if (!expect_sym(';')) return;
            if (t.members.size() < 3) {
                error(kind.span, "Cauchy extraction needs at least three members");
                valid = false;
            }
            if (valid) spec_.tasks.push_back(std::move(t));
        } else if (kind.text == "verify-properties") {
            PropsTask t;
            t.span = kind.span;
            if (peek().kind == Tok::Ident &&
                (peek().text == "ultrametric" || peek().text == "ideal" ||
                 peek().text == "ring" || peek().text == "scalar" || peek().text == "all")) {
                t.suite = advance().text;
            } else if (peek().kind == Tok::Ident && peek().text != "seed" &&
                       peek().text != "instances" && peek().text != "crosschecks") {
                error(peek().span, "unknown suite " + peek().text);
                valid = false;
                advance();
            }
            for (;;) {
                if (eat_ident("seed")) {
                    auto v = expect_int();
                    if (!v) return;
                    if (*v < 0) {
                        error(kind.span, "seed must be nonnegative");
                        valid = false;
                    }
                    t.seed = static_cast<unsigned long long>(*v);
                } else if (at_ident("instances")) {
                    Token at = peek(1);
                    advance();
                    auto v = expect_int();
                    if (!v) return;
                    if (*v < 1 || *v > 100000) {
                        error(at.span, "instances must be between 1 and 100000");
                        valid = false;
                    }
                    t.instances = static_cast<int>(*v);
                } else if (at_ident("crosschecks")) {
                    Token at = peek(1);
                    advance();
                    auto v = expect_int();
                    if (!v) return;
                    if (*v < 0 || *v > 10000) {
                        error(at.span, "crosschecks must be between 0 and 10000");
                        valid = false;
                    }
                    t.crosschecks = static_cast<int>(*v);
                } else {
                    break;
                }
            }
            if (!expect_sym(';')) return;
            if (valid) spec_.tasks.push_back(std::move(t));
        } else {
            error(kind.span, "unknown task kind " + kind.text);
            skip_statement();
        }
    }
};

std::string print_cert(const CertParams& c) {
    return "certify C=" + num_str(c.C) + " a=" + num_str(c.a) + " b=" + num_str(c.b) +
           " s=" + num_str(c.s) + " t=" + num_str(c.t);
}

std::string print_init(const SeqInit& init) {
    if (const auto* e = std::get_if<ExprInit>(&init)) {
        std::string out = "\"" + to_string(e->expr) + "\"";
        if (e->from != 1) out += " from " + std::to_string(e->from);
        if (e->cert) out += " " + print_cert(*e->cert);
        return out;
    }
    if (const auto* d = std::get_if<DeltaInit>(&init)) return "delta " + d->mollifier;
    if (const auto* c = std::get_if<EmbedConstInit>(&init))
        return "embed const \"" + to_string(c->expr) + "\"";
    if (const auto* v = std::get_if<EmbedConvInit>(&init)) {
        std::string arg = v->heaviside ? "heaviside" : "\"" + to_string(v->fexpr) + "\"";
        return "embed conv " + arg + " " + v->mollifier;
    }
    if (const auto* b = std::get_if<CombineInit>(&init)) {
        const char* op = b->op == '+' ? "add" : b->op == '-' ? "sub" : "mul";
        return std::string(op) + " " + b->a + " " + b->b;
    }
    return "dx " + std::get<DxInit>(init).a;
}

std::string print_scale_ref(const ScaleRef& ref) {
    if (std::holds_alternative<LogScaleRef>(ref)) return "log";
    if (const auto* p = std::get_if<PowerScaleRef>(&ref)) return "power " + num_str(p->m);
    if (const auto* e = std::get_if<EgorovScaleRef>(&ref))
        return "egorov " + std::to_string(e->m);
    if (const auto* c = std::get_if<CustomScaleRef>(&ref))
        return "custom \"" + to_string(c->expr) + "\" from " + std::to_string(c->from);
    const auto& a = std::get<AsymScaleRef>(ref);
    return "asymptotic \"" + to_string(a.expr) + "\" at " + std::to_string(a.at_m);
}

std::string print_family_ref(const FamilyRef& ref) {
    if (const auto* p = std::get_if<PowerFamilyRef>(&ref))
        return "power " + std::to_string(p->count);
    if (const auto* e = std::get_if<EgorovFamilyRef>(&ref))
        return "egorov " + std::to_string(e->count);
    const auto& a = std::get<AsymFamilyRef>(ref);
    return "asymptotic \"" + to_string(a.expr) + "\" from " + std::to_string(a.m_lo) +
           " to " + std::to_string(a.m_hi);
}

std::string print_seminorm_ref(const SeminormRef& ref) {
    if (std::holds_alternative<AbsSeminormRef>(ref)) return "abs";
    if (std::holds_alternative<SupSeminormRef>(ref)) return "supderiv";
    const auto& s = std::get<SobolevSeminormRef>(ref);
    return "sobolev " + std::to_string(s.order) + " " + num_str(s.radius);
}

std::string opts_suffix(const std::optional<std::string>& seminorm, int mu, int nu) {
    std::string out;
    if (seminorm) out += " with " + *seminorm;
    out += " mu " + std::to_string(mu) + " nu " + std::to_string(nu);
    return out;
}

struct TaskPrinter {
    std::string operator()(const ClassifyTask& t) const {
        return "task classify " + t.seq + " " + t.scale + " " + to_string(t.mode) +
               opts_suffix(t.seminorm, t.mu, t.nu) + ";";
    }
    std::string operator()(const DistanceTask& t) const {
        return "task distance " + t.a + " " + t.b + " " + t.scale +
               opts_suffix(t.seminorm, t.mu, t.nu) + ";";
    }
    std::string operator()(const EqualTask& t) const {
        return "task equal " + t.a + " " + t.b + " " + t.scale + " " + to_string(t.mode) +
               opts_suffix(t.seminorm, t.mu, t.nu) + ";";
    }
    std::string operator()(const EmbedCheckTask& t) const {
        return "task embed-check " + t.seq + " " + t.scale + " " + to_string(t.mode) +
               opts_suffix(t.seminorm, t.mu, t.nu) + ";";
    }
    std::string operator()(const FamilyTask& t) const {
        return "task family " + t.seq + " " + t.family + " " + to_string(t.mode) +
               opts_suffix(t.seminorm, t.mu, t.nu) + " m_budget " +
               std::to_string(t.m_budget) + ";";
    }
    std::string operator()(const CauchyTask& t) const {
        std::string out = "task cauchy { members: [";
        for (std::size_t i = 0; i < t.members.size(); ++i) {
            if (i) out += ", ";
            out += t.members[i];
        }
        out += "], mu_max: " + std::to_string(t.mu_max) + ", scale: " + t.scale;
        if (t.seminorm) out += ", seminorm: " + *t.seminorm;
        out += " };";
        return out;
    }
    std::string operator()(const PropsTask& t) const {
        return "task verify-properties " + t.suite + " seed " + std::to_string(t.seed) +
               " instances " + std::to_string(t.instances) + " crosschecks " +
               std::to_string(t.crosschecks) + ";";
    }
};

bool expr_ptr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return expr_equal(*a, *b);
}

bool cert_equal(const std::optional<CertParams>& a, const std::optional<CertParams>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->C == b->C && a->a == b->a && a->b == b->b && a->s == b->s && a->t == b->t;
}

bool init_equal(const SeqInit& x, const SeqInit& y) {
    if (x.index() != y.index()) return false;
    if (const auto* a = std::get_if<ExprInit>(&x)) {
        const auto& b = std::get<ExprInit>(y);
        return expr_ptr_equal(a->expr, b.expr) && a->from == b.from &&
               cert_equal(a->cert, b.cert);
    }
    if (const auto* a = std::get_if<DeltaInit>(&x))
        return a->mollifier == std::get<DeltaInit>(y).mollifier;
    if (const auto* a = std::get_if<EmbedConstInit>(&x))
        return expr_ptr_equal(a->expr, std::get<EmbedConstInit>(y).expr);
    if (const auto* a = std::get_if<EmbedConvInit>(&x)) {
        const auto& b = std::get<EmbedConvInit>(y);
        return a->heaviside == b.heaviside && a->mollifier == b.mollifier &&
               (a->heaviside || expr_ptr_equal(a->fexpr, b.fexpr));
    }
    if (const auto* a = std::get_if<CombineInit>(&x)) {
        const auto& b = std::get<CombineInit>(y);
        return a->op == b.op && a->a == b.a && a->b == b.b;
    }
    return std::get<DxInit>(x).a == std::get<DxInit>(y).a;
}

bool scale_ref_equal(const ScaleRef& x, const ScaleRef& y) {
    if (x.index() != y.index()) return false;
    if (std::holds_alternative<LogScaleRef>(x)) return true;
    if (const auto* a = std::get_if<PowerScaleRef>(&x))
        return a->m == std::get<PowerScaleRef>(y).m;
    if (const auto* a = std::get_if<EgorovScaleRef>(&x))
        return a->m == std::get<EgorovScaleRef>(y).m;
    if (const auto* a = std::get_if<CustomScaleRef>(&x)) {
        const auto& b = std::get<CustomScaleRef>(y);
        return expr_ptr_equal(a->expr, b.expr) && a->from == b.from;
    }
    const auto& a = std::get<AsymScaleRef>(x);
    const auto& b = std::get<AsymScaleRef>(y);
    return expr_ptr_equal(a.expr, b.expr) && a.at_m == b.at_m;
}

bool family_ref_equal(const FamilyRef& x, const FamilyRef& y) {
    if (x.index() != y.index()) return false;
    if (const auto* a = std::get_if<PowerFamilyRef>(&x))
        return a->count == std::get<PowerFamilyRef>(y).count;
    if (const auto* a = std::get_if<EgorovFamilyRef>(&x))
        return a->count == std::get<EgorovFamilyRef>(y).count;
    const auto& a = std::get<AsymFamilyRef>(x);
    const auto& b = std::get<AsymFamilyRef>(y);
    return expr_ptr_equal(a.expr, b.expr) && a.m_lo == b.m_lo && a.m_hi == b.m_hi;
}

bool seminorm_ref_equal(const SeminormRef& x, const SeminormRef& y) {
    if (x.index() != y.index()) return false;
    if (const auto* a = std::get_if<SobolevSeminormRef>(&x)) {
        const auto& b = std::get<SobolevSeminormRef>(y);
        return a->order == b.order && a->radius == b.radius;
    }
    return true;
}

bool task_equal(const Task& x, const Task& y) {
    if (x.index() != y.index()) return false;
    if (const auto* a = std::get_if<ClassifyTask>(&x)) {
        const auto& b = std::get<ClassifyTask>(y);
        return a->seq == b.seq && a->scale == b.scale && a->mode == b.mode &&
               a->seminorm == b.seminorm && a->mu == b.mu && a->nu == b.nu;
    }
    if (const auto* a = std::get_if<DistanceTask>(&x)) {
        const auto& b = std::get<DistanceTask>(y);
        return a->a == b.a && a->b == b.b && a->scale == b.scale &&
               a->seminorm == b.seminorm && a->mu == b.mu && a->nu == b.nu;
    }
    if (const auto* a = std::get_if<EqualTask>(&x)) {
        const auto& b = std::get<EqualTask>(y);
        return a->a == b.a && a->b == b.b && a->scale == b.scale && a->mode == b.mode &&
               a->seminorm == b.seminorm && a->mu == b.mu && a->nu == b.nu;
    }
    if (const auto* a = std::get_if<EmbedCheckTask>(&x)) {
        const auto& b = std::get<EmbedCheckTask>(y);
        return a->seq == b.seq && a->scale == b.scale && a->mode == b.mode &&
               a->seminorm == b.seminorm && a->mu == b.mu && a->nu == b.nu;
    }
    if (const auto* a = std::get_if<FamilyTask>(&x)) {
        const auto& b = std::get<FamilyTask>(y);
        return a->seq == b.seq && a->family == b.family && a->mode == b.mode &&
               a->seminorm == b.seminorm && a->mu == b.mu && a->nu == b.nu &&
               a->m_budget == b.m_budget;
    }
    if (const auto* a = std::get_if<CauchyTask>(&x)) {
        const auto& b = std::get<CauchyTask>(y);
        return a->members == b.members && a->mu_max == b.mu_max && a->scale == b.scale &&
               a->seminorm == b.seminorm;
    }
    const auto& a = std::get<PropsTask>(x);
    const auto& b = std::get<PropsTask>(y);
    return a.suite == b.suite && a.seed == b.seed && a.instances == b.instances &&
           a.crosschecks == b.crosschecks;
}

}  // namespace

bool ParseResult::ok() const {
    if (!spec) return false;
    for (const auto& d : diagnostics)
        if (d.severity != Severity::Warning) return false;
    return true;
}

ParseResult parse_spec(std::string_view source) {
    LexResult lr = lex(source);
    if (lr.fatal) {
        ParseResult out;
        out.diagnostics.push_back(*lr.fatal);
        return out;
    }
    return Parser(std::move(lr.tokens)).run();
}

std::string pretty(const ExperimentSpec& spec) {
    std::string out;
    for (const auto& d : spec.scales)
        out += "scale " + d.name + " = " + print_scale_ref(d.ref) + ";\n";
    for (const auto& d : spec.families)
        out += "family " + d.name + " = " + print_family_ref(d.ref) + ";\n";
    for (const auto& d : spec.mollifiers)
        out += "mollifier " + d.name + " = " +
               (d.kind == MollifierKind::Gaussian ? "gaussian" : "bump") + ";\n";
    for (const auto& d : spec.seminorms)
        out += "seminorm " + d.name + " = " + print_seminorm_ref(d.ref) + ";\n";
    for (const auto& d : spec.seqs)
        out += "seq " + d.name + " = " + print_init(d.init) + ";\n";
    for (const auto& t : spec.tasks) out += std::visit(TaskPrinter{}, t) + "\n";
    return out;
}

bool spec_equal(const ExperimentSpec& a, const ExperimentSpec& b) {
    if (a.scales.size() != b.scales.size() || a.families.size() != b.families.size() ||
        a.mollifiers.size() != b.mollifiers.size() ||
        a.seminorms.size() != b.seminorms.size() || a.seqs.size() != b.seqs.size() ||
        a.tasks.size() != b.tasks.size())
        return false;
    for (std::size_t i = 0; i < a.scales.size(); ++i)
        if (a.scales[i].name != b.scales[i].name ||
            !scale_ref_equal(a.scales[i].ref, b.scales[i].ref))
            return false;
    for (std::size_t i = 0; i < a.families.size(); ++i)
        if (a.families[i].name != b.families[i].name ||
            !family_ref_equal(a.families[i].ref, b.families[i].ref))
            return false;
    for (std::size_t i = 0; i < a.mollifiers.size(); ++i)
        if (a.mollifiers[i].name != b.mollifiers[i].name ||
            a.mollifiers[i].kind != b.mollifiers[i].kind)
            return false;
    for (std::size_t i = 0; i < a.seminorms.size(); ++i)
        if (a.seminorms[i].name != b.seminorms[i].name ||
            !seminorm_ref_equal(a.seminorms[i].ref, b.seminorms[i].ref))
            return false;
    for (std::size_t i = 0; i < a.seqs.size(); ++i)
        if (a.seqs[i].name != b.seqs[i].name || !init_equal(a.seqs[i].init, b.seqs[i].init))
            return false;
    for (std::size_t i = 0; i < a.tasks.size(); ++i)
        if (!task_equal(a.tasks[i], b.tasks[i])) return false;
    return true;
}

}  // namespace gfa
