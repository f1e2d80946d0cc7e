#include "gfa/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <variant>

#include "gfa/classify.hpp"
#include "gfa/complete.hpp"
#include "gfa/csv.hpp"
#include "gfa/embed.hpp"
#include "gfa/errors.hpp"
#include "gfa/family.hpp"
#include "gfa/props.hpp"

namespace gfa {

namespace {

struct Bundle {
    std::map<std::string, Seq> seqs;
    std::map<std::string, Scale> scales;
    std::map<std::string, ScaleFamily> families;
    std::map<std::string, Mollifier> mollifiers;
    std::map<std::string, SeminormFamily> seminorms;
};

Scale make_scale(const ScaleRef& ref) {
    if (std::holds_alternative<LogScaleRef>(ref)) return Scale::log();
    if (const auto* p = std::get_if<PowerScaleRef>(&ref)) return Scale::power(p->m);
    if (const auto* e = std::get_if<EgorovScaleRef>(&ref)) return Scale::egorov(e->m);
    if (const auto* c = std::get_if<CustomScaleRef>(&ref))
        return Scale::custom(c->expr, c->from);
    const auto& a = std::get<AsymScaleRef>(ref);
    return Scale::from_asymptotic(AsymptoticFamily::from_expr(a.expr), a.at_m);
}

ScaleFamily make_family(const FamilyRef& ref) {
    if (const auto* p = std::get_if<PowerFamilyRef>(&ref))
        return ScaleFamily::power(p->count);
    if (const auto* e = std::get_if<EgorovFamilyRef>(&ref))
        return ScaleFamily::egorov(e->count);
    const auto& a = std::get<AsymFamilyRef>(ref);
    return ScaleFamily::from_asymptotic(AsymptoticFamily::from_expr(a.expr), a.m_lo,
                                        a.m_hi);
}

SeminormFamily make_seminorm(const SeminormRef& ref) {
    if (std::holds_alternative<AbsSeminormRef>(ref)) return SeminormFamily::absolute_value();
    if (std::holds_alternative<SupSeminormRef>(ref)) return SeminormFamily::sup_derivatives();
    const auto& s = std::get<SobolevSeminormRef>(ref);
    return SeminormFamily::sobolev(s.order, s.radius);
}

Seq make_seq(const SeqDecl& d, const Bundle& b) {
    if (const auto* e = std::get_if<ExprInit>(&d.init)) {
        Seq s = Seq::from_expr(e->expr, e->from, d.name);
        if (e->cert) s = s.with_certificate(GrowthCertificate::uniform(*e->cert));
        return s;
    }
    if (const auto* del = std::get_if<DeltaInit>(&d.init))
        return make_delta(b.mollifiers.at(del->mollifier)).with_label(d.name);
    if (const auto* c = std::get_if<EmbedConstInit>(&d.init)) {
        Element el = c->expr->uses_x ? Element(SmoothElement{c->expr, std::nullopt})
                                     : Element(Scalar(eval(c->expr, EvalEnv{})));
        return embed_constant(el).with_label(d.name);
    }
    if (const auto* v = std::get_if<EmbedConvInit>(&d.init)) {
        const Mollifier& m = b.mollifiers.at(v->mollifier);
        Seq s = v->heaviside
                    ? embed_heaviside(m)
                    : embed_by_convolution(SmoothElement{v->fexpr, std::nullopt}, m);
        return s.with_label(d.name);
    }
    if (const auto* comb = std::get_if<CombineInit>(&d.init)) {
        const Seq& x = b.seqs.at(comb->a);
        const Seq& y = b.seqs.at(comb->b);
        Seq s = comb->op == '+' ? seq_add(x, y)
                : comb->op == '-' ? seq_sub(x, y)
                                  : seq_mul(x, y);
        return s.with_label(d.name);
    }
    return seq_derivative(b.seqs.at(std::get<DxInit>(d.init).a)).with_label(d.name);
}

Bundle materialize(const ExperimentSpec& spec) {
    Bundle b;
    for (const auto& d : spec.scales) b.scales.emplace(d.name, make_scale(d.ref));
    for (const auto& d : spec.families) b.families.emplace(d.name, make_family(d.ref));
    for (const auto& d : spec.mollifiers)
        b.mollifiers.emplace(d.name, d.kind == MollifierKind::Gaussian ? Mollifier::gaussian()
                                                                       : Mollifier::bump());
    for (const auto& d : spec.seminorms) b.seminorms.emplace(d.name, make_seminorm(d.ref));
    for (const auto& d : spec.seqs) b.seqs.emplace(d.name, make_seq(d, b));
    return b;
}

/// Scalar sequences default to |.|; anything smooth gets the sup-derivative
/// family. An explicit `with` clause in the task overrides this.
SeminormFamily pick_seminorm(const Bundle& b, const std::optional<std::string>& named,
                             const Seq& probe) {
    if (named) return b.seminorms.at(*named);
    Element e = probe.at(probe.domain_start());
    if (std::holds_alternative<Scalar>(e)) return SeminormFamily::absolute_value();
    return SeminormFamily::sup_derivatives();
}

const char* method_str(FitMethod m) {
    return m == FitMethod::ClosedForm ? "closed-form" : "tail-fit";
}

const char* dir_str(FamilyDirection d) {
    switch (d) {
        case FamilyDirection::IncreasingInM: return "increasing";
        case FamilyDirection::DecreasingInM: return "decreasing";
        case FamilyDirection::Neither: return "neither";
    }
    return "?";
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

const std::vector<std::string> kClassifyColumns = {
    "label", "mode", "mu", "nu", "method", "exponent", "value", "residual", "verdict"};

void estimate_row(CsvWriter& csv, const std::string& label, const std::string& mode,
                  int mu, int nu, const UltranormEstimate& est, const std::string& verdict) {
    csv.add_row({label, mode, csv_int(mu), csv_int(nu), method_str(est.method),
                 csv_number(est.exponent), csv_number(est.value), csv_number(est.residual),
                 verdict});
}

struct TaskCtx {
    const Bundle& bundle;
    EvalBudget budget;
    TailFitPolicy policy;
    std::optional<unsigned long long> seed_override;
};

struct TaskRun {
    CsvWriter csv{{}};
    std::string status = "ok";
    std::string detail;
};

TaskRun run_classify(const ClassifyTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter(kClassifyColumns);
    const Seq& f = ctx.bundle.seqs.at(t.seq);
    const Scale& r = ctx.bundle.scales.at(t.scale);
    SeminormFamily p = pick_seminorm(ctx.bundle, t.seminorm, f);
    Classification c =
        classify(f, p, r, t.mode, IndexBudget{t.mu, t.nu}, ctx.budget, ctx.policy);
    for (const auto& w : c.witnesses)
        estimate_row(out.csv, t.seq, to_string(t.mode), w.mu, w.nu, w.estimate,
                     to_string(c.verdict));
    out.status = c.verdict == Verdict::Inconclusive ? "inconclusive" : "ok";
    out.detail = std::string("verdict=") + to_string(c.verdict);
    return out;
}

TaskRun run_distance(const DistanceTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter(kClassifyColumns);
    const Seq& a = ctx.bundle.seqs.at(t.a);
    const Seq& b = ctx.bundle.seqs.at(t.b);
    const Scale& r = ctx.bundle.scales.at(t.scale);
    SeminormFamily p = pick_seminorm(ctx.bundle, t.seminorm, a);
    UltranormEstimate est = distance(a, b, p, t.mu, t.nu, r, ctx.budget, ctx.policy);
    out.status = est.low_confidence ? "inconclusive" : "ok";
    estimate_row(out.csv, t.a + " vs " + t.b, "", t.mu, t.nu, est, out.status);
    out.detail = "value=" + csv_number(est.value);
    return out;
}

TaskRun run_equal(const EqualTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter(kClassifyColumns);
    const Seq& a = ctx.bundle.seqs.at(t.a);
    const Seq& b = ctx.bundle.seqs.at(t.b);
    const Scale& r = ctx.bundle.scales.at(t.scale);
    SeminormFamily p = pick_seminorm(ctx.bundle, t.seminorm, a);
    IndexBudget budget{t.mu, t.nu};
    TriVerdict v = equal_in_quotient(a, b, p, r, t.mode, budget, ctx.budget, ctx.policy);
    Classification c =
        classify(seq_sub(a, b), p, r, t.mode, budget, ctx.budget, ctx.policy);
    for (const auto& w : c.witnesses)
        estimate_row(out.csv, t.a + " vs " + t.b, to_string(t.mode), w.mu, w.nu,
                     w.estimate, to_string(v));
    out.status = v == TriVerdict::Inconclusive ? "inconclusive" : "ok";
    out.detail = to_string(v);
    return out;
}

TaskRun run_embed_check(const EmbedCheckTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter(kClassifyColumns);
    const Seq& f = ctx.bundle.seqs.at(t.seq);
    const Scale& r = ctx.bundle.scales.at(t.scale);
    SeminormFamily p = pick_seminorm(ctx.bundle, t.seminorm, f);
    AdmissibilityReport rep = check_scale_admissible(f, p, r, t.mode,
                                                     IndexBudget{t.mu, t.nu}, ctx.budget,
                                                     ctx.policy);
    std::string verdict = rep.admissible ? "admissible" : "not-admissible";
    bool lowconf = false;
    for (const auto& w : rep.a_table) {
        estimate_row(out.csv, t.seq, to_string(t.mode), w.mu, w.nu, w.estimate, verdict);
        lowconf = lowconf || w.estimate.low_confidence;
    }
    out.status = (!rep.admissible && lowconf) ? "inconclusive" : "ok";
    out.detail = "admissible=" + bool_str(rep.admissible);
    if (rep.nonzero_witness) {
        for (const auto& w : rep.a_table)
            if (w.mu == rep.nonzero_witness->first && w.nu == rep.nonzero_witness->second)
                out.detail += " witness=" + csv_number(w.estimate.value);
    }
    return out;
}

TaskRun run_family(const FamilyTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter({"label", "m", "level_verdict", "in_F", "in_K", "f_level",
                         "k_level", "direction"});
    const Seq& f = ctx.bundle.seqs.at(t.seq);
    const ScaleFamily& fam = ctx.bundle.families.at(t.family);
    SeminormFamily p = pick_seminorm(ctx.bundle, t.seminorm, f);
    FamilyVerdict v = family_membership(f, fam, p, t.mode, t.mu, t.nu, t.m_budget,
                                        ctx.budget, ctx.policy);
    auto level_str = [](const std::optional<int>& l) {
        return l ? csv_int(*l) : std::string();
    };
    for (const auto& lv : v.levels)
        out.csv.add_row({t.seq, csv_int(lv.m), to_string(lv.verdict), to_string(v.in_F),
                         to_string(v.in_K), level_str(v.f_level), level_str(v.k_level),
                         dir_str(v.direction)});
    out.status = (v.in_F == TriState::Unknown || v.in_K == TriState::Unknown)
                     ? "inconclusive"
                     : "ok";
    out.detail = std::string("in_F=") + to_string(v.in_F) + " in_K=" + to_string(v.in_K) +
                 "; " + v.detail;
    return out;
}

TaskRun run_cauchy(const CauchyTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter({"field", "mu", "m", "n", "value"});
    std::vector<Seq> members;
    for (const auto& name : t.members) members.push_back(ctx.bundle.seqs.at(name));
    const Scale& r = ctx.bundle.scales.at(t.scale);
    SeminormFamily p = pick_seminorm(ctx.bundle, t.seminorm, members.front());
    CauchyData cd;
    try {
        cd = extract_moduli(members, p, r, t.mu_max, ctx.budget, ctx.policy);
    } catch (const NotCauchyError& e) {
        out.status = "failed";
        out.detail = e.what();
        return out;
    }
    for (std::size_t i = 0; i < cd.m_mu.size(); ++i)
        out.csv.add_row({"modulus", csv_int(static_cast<long>(i) + 1), csv_int(cd.m_mu[i]),
                         csv_int(cd.n_mu[i]), csv_number(std::ldexp(1.0, -(i + 1)))});
    Seq fbar = diagonalize(cd);
    ConvergenceReport rep =
        verify_convergence(cd, fbar, p, r, t.mu_max, ctx.budget, ctx.policy);
    for (std::size_t j = 0; j < rep.distances.size(); ++j)
        out.csv.add_row(
            {"distance", "", csv_int(static_cast<long>(j)), "", csv_number(rep.distances[j])});
    out.csv.add_row({"final_bound", "", "", "", csv_number(rep.final_bound)});
    out.status = rep.decreasing ? "ok" : "failed";
    out.detail = "final=" + csv_number(rep.distances.back()) +
                 " bound=" + csv_number(rep.final_bound) +
                 " monotone=" + bool_str(rep.nonincreasing);
    return out;
}

TaskRun run_props(const PropsTask& t, const TaskCtx& ctx) {
    TaskRun out;
    out.csv = CsvWriter({"suite", "instances", "crosschecks", "violations", "max_error",
                         "passed"});
    PropsConfig cfg;
    cfg.seed = ctx.seed_override.value_or(t.seed);
    cfg.instances = t.instances;
    cfg.crosschecks = t.crosschecks;
    cfg.eval = ctx.budget;
    cfg.policy = ctx.policy;
    std::vector<SuiteReport> reports;
    if (t.suite == "all")
        reports = run_all_suites(cfg);
    else if (t.suite == "ultrametric")
        reports.push_back(run_ultrametric_suite(cfg));
    else if (t.suite == "scalar")
        reports.push_back(run_scalar_suite(cfg));
    else if (t.suite == "ideal")
        reports.push_back(run_ideal_suite(cfg));
    else
        reports.push_back(run_ring_suite(cfg));
    int passed = 0;
    std::string first_fail;
    for (const auto& rep : reports) {
        out.csv.add_row({rep.suite, csv_int(rep.instances), csv_int(rep.crosschecks),
                         csv_int(rep.violations), csv_number(rep.max_error),
                         bool_str(rep.passed())});
        if (rep.passed())
            ++passed;
        else if (first_fail.empty())
            first_fail = rep.suite + ": " + rep.detail;
    }
    out.status = passed == static_cast<int>(reports.size()) ? "ok" : "failed";
    out.detail = first_fail.empty() ? std::to_string(passed) + "/" +
                                          std::to_string(reports.size()) + " suites passed"
                                    : first_fail;
    return out;
}

struct TaskVisitor {
    const TaskCtx& ctx;
    TaskRun operator()(const ClassifyTask& t) const { return run_classify(t, ctx); }
    TaskRun operator()(const DistanceTask& t) const { return run_distance(t, ctx); }
    TaskRun operator()(const EqualTask& t) const { return run_equal(t, ctx); }
    TaskRun operator()(const EmbedCheckTask& t) const { return run_embed_check(t, ctx); }
    TaskRun operator()(const FamilyTask& t) const { return run_family(t, ctx); }
    TaskRun operator()(const CauchyTask& t) const { return run_cauchy(t, ctx); }
    TaskRun operator()(const PropsTask& t) const { return run_props(t, ctx); }
};

const char* task_kind(const Task& t) {
    struct Kind {
        const char* operator()(const ClassifyTask&) const { return "classify"; }
        const char* operator()(const DistanceTask&) const { return "distance"; }
        const char* operator()(const EqualTask&) const { return "equal"; }
        const char* operator()(const EmbedCheckTask&) const { return "embed-check"; }
        const char* operator()(const FamilyTask&) const { return "family"; }
        const char* operator()(const CauchyTask&) const { return "cauchy"; }
        const char* operator()(const PropsTask&) const { return "verify-properties"; }
    };
    return std::visit(Kind{}, t);
}

TaskOutcome run_one(const Task& task, int index, const TaskCtx& ctx,
                    const std::filesystem::path& outdir) {
    char stem[64];
    std::snprintf(stem, sizeof(stem), "%02d-%s", index + 1, task_kind(task));
    TaskOutcome outcome;
    outcome.name = stem;
    outcome.kind = task_kind(task);
    outcome.output = std::string(stem) + ".csv";
    TaskRun run;
    try {
        run = std::visit(TaskVisitor{ctx}, task);
    } catch (const std::exception& e) {
        run.status = "error";
        run.detail = e.what();
    }
    try {
        run.csv.write_file((outdir / outcome.output).string());
    } catch (const std::exception& e) {
        run.status = "error";
        run.detail = e.what();
    }
    outcome.status = run.status;
    outcome.detail = run.detail;
    return outcome;
}

}  // namespace

RunReport run_spec(const ExperimentSpec& spec, const std::filesystem::path& outdir,
                   const RunOptions& opts) {
    RunReport report;
    std::filesystem::create_directories(outdir);
    EvalBudget budget;
    if (opts.nmax) budget.n_max = std::clamp(*opts.nmax, 1000L, 10'000'000L);
    Bundle bundle;
    try {
        bundle = materialize(spec);
    } catch (const std::exception& e) {
        report.outcomes.push_back({"setup", "setup", "", "error", e.what()});
        report.exit_code = 1;
    }
    const TaskCtx ready{bundle, budget, TailFitPolicy{}, opts.seed};
    if (report.exit_code == 0) {
        if (opts.parallel) {
            std::vector<std::future<TaskOutcome>> futures;
            for (std::size_t i = 0; i < spec.tasks.size(); ++i)
                futures.push_back(std::async(std::launch::async, run_one,
                                             std::cref(spec.tasks[i]), static_cast<int>(i),
                                             std::cref(ready), std::cref(outdir)));
            for (auto& f : futures) report.outcomes.push_back(f.get());
        } else {
            for (std::size_t i = 0; i < spec.tasks.size(); ++i)
                report.outcomes.push_back(
                    run_one(spec.tasks[i], static_cast<int>(i), ready, outdir));
        }
        for (const auto& o : report.outcomes) {
            if (o.status == "failed" || o.status == "error") report.exit_code = 1;
            if (o.status == "inconclusive" && report.exit_code == 0) report.exit_code = 2;
        }
    }
    CsvWriter summary({"task", "kind", "output", "status", "detail"});
    for (const auto& o : report.outcomes)
        summary.add_row({o.name, o.kind, o.output, o.status, o.detail});
    summary.write_file((outdir / "summary.csv").string());
    return report;
}

}  // namespace gfa
