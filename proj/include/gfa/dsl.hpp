#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gfa/classify.hpp"

namespace gfa {

struct SrcSpan {
    int line = 1, col = 1;
    int length = 0;
    int offset = 0;
};

enum class Severity { Warning, Error, Fatal };

/// Parser/validator finding. Spans index into the original source; at most
/// one Fatal is produced and it stops the parse.
struct ParseDiagnostic {
    SrcSpan span;
    Severity severity = Severity::Error;
    std::string message;
    std::string suggestion;  // "did you mean ...?" when a near-name exists
};

// --- declarations ------------------------------------------------------

struct ExprInit {
    ExprPtr expr;
    long from = 1;
    std::optional<CertParams> cert;
};
struct DeltaInit {
    std::string mollifier;
};
struct EmbedConstInit {
    ExprPtr expr;
};
struct EmbedConvInit {
    ExprPtr fexpr;  // null when heaviside
    bool heaviside = false;
    std::string mollifier;
};
struct CombineInit {
    char op = '+';  // '+', '-', '*'
    std::string a, b;
};
struct DxInit {
    std::string a;
};
using SeqInit =
    std::variant<ExprInit, DeltaInit, EmbedConstInit, EmbedConvInit, CombineInit, DxInit>;

struct SeqDecl {
    std::string name;
    SeqInit init;
    SrcSpan span;
};

struct LogScaleRef {};
struct PowerScaleRef {
    double m = 1;
};
struct EgorovScaleRef {
    long m = 0;
};
struct CustomScaleRef {
    ExprPtr expr;
    long from = 2;
};
struct AsymScaleRef {
    ExprPtr expr;  // in n and m
    int at_m = 1;
};
using ScaleRef =
    std::variant<LogScaleRef, PowerScaleRef, EgorovScaleRef, CustomScaleRef, AsymScaleRef>;

struct ScaleDecl {
    std::string name;
    ScaleRef ref;
    SrcSpan span;
};

struct PowerFamilyRef {
    int count = 6;
};
struct EgorovFamilyRef {
    int count = 6;
};
struct AsymFamilyRef {
    ExprPtr expr;
    int m_lo = 1, m_hi = 6;
};
using FamilyRef = std::variant<PowerFamilyRef, EgorovFamilyRef, AsymFamilyRef>;

struct FamilyDecl {
    std::string name;
    FamilyRef ref;
    SrcSpan span;
};

enum class MollifierKind { Gaussian, Bump };

struct MollifierDecl {
    std::string name;
    MollifierKind kind = MollifierKind::Gaussian;
    SrcSpan span;
};

struct AbsSeminormRef {};
struct SupSeminormRef {};
struct SobolevSeminormRef {
    int order = 1;
    double radius = 1.0;
};
using SeminormRef = std::variant<AbsSeminormRef, SupSeminormRef, SobolevSeminormRef>;

struct SeminormDecl {
    std::string name;
    SeminormRef ref;
    SrcSpan span;
};

// --- tasks --------------------------------------------------------------

struct ClassifyTask {
    std::string seq, scale;
    QuantMode mode = QuantMode::Projective;
    std::optional<std::string> seminorm;
    int mu = 4, nu = 4;
    SrcSpan span;
};
struct DistanceTask {
    std::string a, b, scale;
    std::optional<std::string> seminorm;
    int mu = 1, nu = 0;
    SrcSpan span;
};
struct EqualTask {
    std::string a, b, scale;
    QuantMode mode = QuantMode::Projective;
    std::optional<std::string> seminorm;
    int mu = 4, nu = 4;
    SrcSpan span;
};
struct EmbedCheckTask {
    std::string seq, scale;
    QuantMode mode = QuantMode::Projective;
    std::optional<std::string> seminorm;
    int mu = 4, nu = 4;
    SrcSpan span;
};
struct FamilyTask {
    std::string seq, family;
    QuantMode mode = QuantMode::Projective;
    std::optional<std::string> seminorm;
    int mu = 4, nu = 4;
    int m_budget = 6;
    SrcSpan span;
};
struct CauchyTask {
    std::vector<std::string> members;
    int mu_max = 4;
    std::string scale;
    std::optional<std::string> seminorm;
    SrcSpan span;
};
struct PropsTask {
    std::string suite = "all";
    unsigned long long seed = 42;
    int instances = 200;
    int crosschecks = 20;
    SrcSpan span;
};
using Task = std::variant<ClassifyTask, DistanceTask, EqualTask, EmbedCheckTask, FamilyTask,
                          CauchyTask, PropsTask>;

/// Parsed experiment file. Declarations are stored grouped by kind in source
/// order; canonical printing emits groups in dependency order (scales,
/// families, mollifiers, seminorms, sequences, tasks), which preserves the
/// declare-before-use discipline the parser enforces.
struct ExperimentSpec {
    std::vector<ScaleDecl> scales;
    std::vector<FamilyDecl> families;
    std::vector<MollifierDecl> mollifiers;
    std::vector<SeminormDecl> seminorms;
    std::vector<SeqDecl> seqs;
    std::vector<Task> tasks;
};

struct ParseResult {
    std::optional<ExperimentSpec> spec;  // absent after a Fatal diagnostic
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const;  // spec present and no Error/Fatal diagnostics
};

ParseResult parse_spec(std::string_view source);

/// Canonical, line-oriented form: one statement per line, expressions
/// reprinted from their trees, numbers in shortest round-trip form.
/// parse_spec(pretty(s)) is structurally identical to s.
std::string pretty(const ExperimentSpec& spec);

/// Structural equality; source spans are ignored.
bool spec_equal(const ExperimentSpec& a, const ExperimentSpec& b);

}  // namespace gfa
