#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "gfa/dsl.hpp"

using namespace gfa;

namespace {

bool has_message(const ParseResult& r, const std::string& msg) {
    for (const auto& d : r.diagnostics)
        if (d.message == msg) return true;
    return false;
}

const ParseDiagnostic* find_message(const ParseResult& r, const std::string& msg) {
    for (const auto& d : r.diagnostics)
        if (d.message == msg) return &d;
    return nullptr;
}

void check_spans_within(const ParseResult& r, std::string_view source) {
    for (const auto& d : r.diagnostics) {
        CHECK(d.span.offset >= 0);
        CHECK(d.span.offset + d.span.length <= static_cast<int>(source.size()));
        CHECK(d.span.line >= 1);
        CHECK(d.span.col >= 1);
    }
}

}  // namespace

TEST_CASE("smallest valid spec") {
    auto r = parse_spec("seq f = \"n^2\"; scale r = log; task classify f r projective;");
    REQUIRE(r.ok());
    CHECK(r.spec->seqs.size() == 1);
    CHECK(r.spec->scales.size() == 1);
    CHECK(r.spec->tasks.size() == 1);
    const auto* t = std::get_if<ClassifyTask>(&r.spec->tasks[0]);
    REQUIRE(t != nullptr);
    CHECK(t->seq == "f");
    CHECK(t->scale == "r");
    CHECK(t->mode == QuantMode::Projective);
    CHECK(t->mu == 4);  // defaults fill unstated budgets
    CHECK(t->nu == 4);
}

TEST_CASE("undeclared names are reported at their spans") {
    std::string src = "task classify g r;";
    auto r = parse_spec(src);
    CHECK_FALSE(r.ok());
    const auto* d = find_message(r, "unknown name g");
    REQUIRE(d != nullptr);
    CHECK(src.substr(d->span.offset, d->span.length) == "g");
    check_spans_within(r, src);
}

TEST_CASE("near-miss names earn a suggestion") {
    auto r = parse_spec("seq hump = \"n\"; scale r = log; task classify hmup r projective;");
    const auto* d = find_message(r, "unknown name hmup");
    REQUIRE(d != nullptr);
    CHECK(d->suggestion == "did you mean 'hump'?");
}

TEST_CASE("scale parameter validation") {
    auto p = parse_spec("scale p = power 0;");
    CHECK_FALSE(p.ok());
    CHECK(has_message(p, "power scale parameter must be positive"));

    auto e = parse_spec("scale e = egorov -1;");
    CHECK_FALSE(e.ok());
    CHECK(has_message(e, "egorov scale parameter must be a natural number"));

    auto c = parse_spec("scale c = custom \"1/x\";");
    CHECK_FALSE(c.ok());
    CHECK(has_message(c, "custom scale expression may only use n"));
}

TEST_CASE("duplicate declarations are rejected") {
    auto r = parse_spec("scale r = log; scale r = log;");
    CHECK_FALSE(r.ok());
    CHECK(has_message(r, "duplicate name r"));
}

TEST_CASE("cauchy task needs three members") {
    auto r = parse_spec(
        "scale r = log; seq a = \"1\"; seq b = \"1/n\";"
        " task cauchy { members: [a, b], mu_max: 2, scale: r };");
    CHECK_FALSE(r.ok());
    CHECK(has_message(r, "Cauchy extraction needs at least three members"));
}

TEST_CASE("props task validates its suite") {
    auto r = parse_spec("task verify-properties rng seed 1;");
    CHECK_FALSE(r.ok());
    CHECK(has_message(r, "unknown suite rng"));
}

TEST_CASE("budget caps are enforced") {
    auto mu = parse_spec("seq f = \"n\"; scale r = log; task classify f r projective mu 9;");
    CHECK(has_message(mu, "mu budget must be between 1 and 8"));
    auto nu = parse_spec("seq f = \"n\"; scale r = log; task classify f r projective nu 9;");
    CHECK(has_message(nu, "nu budget must be between 0 and 8"));
    auto mb = parse_spec(
        "seq f = \"n\"; family p = power 6; task family f p projective m_budget 13;");
    CHECK(has_message(mb, "m budget must be between 1 and 12"));
}

TEST_CASE("unterminated string is fatal and yields no spec") {
    std::string src = "seq f = \"n^2";
    auto r = parse_spec(src);
    CHECK_FALSE(r.spec.has_value());
    REQUIRE(!r.diagnostics.empty());
    bool fatal = false;
    for (const auto& d : r.diagnostics)
        if (d.severity == Severity::Fatal && d.message == "unterminated string") fatal = true;
    CHECK(fatal);
    check_spans_within(r, src);
}

TEST_CASE("expression errors point into the string body") {
    std::string src = "seq f = \"1 + * 2\";";
    auto r = parse_spec(src);
    CHECK_FALSE(r.ok());
    REQUIRE(!r.diagnostics.empty());
    int quote = static_cast<int>(src.find('"'));
    CHECK(r.diagnostics[0].span.offset > quote);
    check_spans_within(r, src);
}

static const char* kFullSpec =
    "scale r = log;\n"
    "scale pw = power 2;\n"
    "scale eg = egorov 3;\n"
    "scale cu = custom \"1/log(log(n))\" from 16;\n"
    "scale as = asymptotic \"n^(-m)\" at 2;\n"
    "family pf = power 6;\n"
    "family ef = egorov 8;\n"
    "family af = asymptotic \"n^(-m)\" from 1 to 4;\n"
    "mollifier phi = gaussian;\n"
    "mollifier bp = bump;\n"
    "seminorm ab = abs;\n"
    "seminorm sd = supderiv;\n"
    "seminorm sb = sobolev 1 1;\n"
    "seq f = \"n^2\" from 2 certify C=2.5 a=1 b=0 s=-1 t=1;\n"
    "seq g = \"1/n\";\n"
    "seq d = delta phi;\n"
    "seq c = embed const \"5\";\n"
    "seq cv = embed conv \"sin(x)\" phi;\n"
    "seq hv = embed conv heaviside bp;\n"
    "seq s = add f g;\n"
    "seq m = mul f g;\n"
    "seq dd = dx d;\n"
    "task classify f r projective mu 4 nu 4;\n"
    "task classify g pw inductive with ab mu 2 nu 1;\n"
    "task distance f g r mu 1 nu 0;\n"
    "task equal f g r projective mu 4 nu 4;\n"
    "task embed-check d r projective with sd mu 1 nu 2;\n"
    "task family f pf projective mu 1 nu 0 m_budget 6;\n"
    "task cauchy { members: [f, g, s], mu_max: 2, scale: r, seminorm: ab };\n"
    "task verify-properties all seed 42 instances 100 crosschecks 10;\n";

TEST_CASE("pretty printing reaches a fixed point over every construct") {
    auto first = parse_spec(kFullSpec);
    REQUIRE_MESSAGE(first.ok(),
                    (first.diagnostics.empty() ? std::string() : first.diagnostics[0].message));
    std::string p1 = pretty(*first.spec);
    auto second = parse_spec(p1);
    REQUIRE(second.ok());
    CHECK(pretty(*second.spec) == p1);
    CHECK(spec_equal(*first.spec, *second.spec));
}

TEST_CASE("certify clause prints all five parameters") {
    auto r = parse_spec("seq f = \"exp(-n)\" certify C=1 s=-1 t=1;");
    REQUIRE(r.ok());
    std::string p = pretty(*r.spec);
    CHECK(p == "seq f = \"exp(-n)\" certify C=1 a=0 b=0 s=-1 t=1;\n");
}

TEST_CASE("structural equality ignores spans but sees parameter changes") {
    auto a = parse_spec("seq f = \"n\"; scale r = log;   task classify f r projective mu 4 nu 4;");
    auto b = parse_spec("seq f = \"n\";\nscale r = log;\ntask classify f r projective;");
    auto c = parse_spec("seq f = \"n\"; scale r = log; task classify f r projective mu 3 nu 4;");
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    REQUIRE(c.ok());
    CHECK(spec_equal(*a.spec, *b.spec));
    CHECK_FALSE(spec_equal(*a.spec, *c.spec));
}
