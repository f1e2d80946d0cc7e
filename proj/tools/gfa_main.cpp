#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gfa/props.hpp"
#include "gfa/runner.hpp"

namespace {

const char* severity_word(gfa::Severity s) {
    switch (s) {
        case gfa::Severity::Warning: return "warning";
        case gfa::Severity::Error: return "error";
        case gfa::Severity::Fatal: return "fatal";
    }
    return "?";
}

void print_diagnostics(const std::string& file, const gfa::ParseResult& result) {
    for (const auto& d : result.diagnostics) {
        std::cerr << file << ":" << d.span.line << ":" << d.span.col << ": "
                  << severity_word(d.severity) << ": " << d.message << "\n";
        if (!d.suggestion.empty()) std::cerr << "  " << d.suggestion << "\n";
    }
}

gfa::ParseResult parse_file(const std::string& path, bool& io_ok) {
    std::ifstream in(path, std::ios::binary);
    io_ok = static_cast<bool>(in);
    if (!io_ok) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    return gfa::parse_spec(buf.str());
}

std::optional<long> env_nmax() {
    const char* s = std::getenv("GFA_NMAX");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v <= 0) return std::nullopt;
    return v;
}

int cmd_run(const std::string& spec_file, const std::string& out_dir,
            std::optional<unsigned long long> seed, std::optional<long> nmax,
            bool parallel) {
    bool io_ok = false;
    gfa::ParseResult result = parse_file(spec_file, io_ok);
    if (!io_ok) {
        std::cerr << "cannot read " << spec_file << "\n";
        return 1;
    }
    print_diagnostics(spec_file, result);
    if (!result.ok()) return 1;
    gfa::RunOptions opts;
    opts.seed = seed;
    opts.nmax = nmax ? nmax : env_nmax();
    opts.parallel = parallel;
    gfa::RunReport report = gfa::run_spec(*result.spec, out_dir, opts);
    for (const auto& o : report.outcomes)
        std::cout << o.name << ": " << o.status
                  << (o.detail.empty() ? "" : " (" + o.detail + ")") << "\n";
    std::cout << "outputs in " << out_dir << ", exit " << report.exit_code << "\n";
    return report.exit_code;
}

int cmd_check(const std::string& spec_file) {
    bool io_ok = false;
    gfa::ParseResult result = parse_file(spec_file, io_ok);
    if (!io_ok) {
        std::cerr << "cannot read " << spec_file << "\n";
        return 1;
    }
    print_diagnostics(spec_file, result);
    if (!result.ok()) return 1;
    const auto& s = *result.spec;
    std::cout << spec_file << ": ok ("
              << s.scales.size() + s.families.size() + s.mollifiers.size() +
                     s.seminorms.size() + s.seqs.size()
              << " declarations, " << s.tasks.size() << " tasks)\n";
    return 0;
}

int cmd_fmt(const std::string& spec_file) {
    bool io_ok = false;
    gfa::ParseResult result = parse_file(spec_file, io_ok);
    if (!io_ok) {
        std::cerr << "cannot read " << spec_file << "\n";
        return 1;
    }
    print_diagnostics(spec_file, result);
    if (!result.ok()) return 1;
    std::cout << gfa::pretty(*result.spec);
    return 0;
}

int cmd_props(const std::string& suite, unsigned long long seed, int instances,
              int crosschecks) {
    gfa::PropsConfig cfg;
    cfg.seed = seed;
    cfg.instances = instances;
    cfg.crosschecks = crosschecks;
    std::vector<gfa::SuiteReport> reports;
    if (suite == "all")
        reports = gfa::run_all_suites(cfg);
    else if (suite == "ultrametric")
        reports.push_back(gfa::run_ultrametric_suite(cfg));
    else if (suite == "scalar")
        reports.push_back(gfa::run_scalar_suite(cfg));
    else if (suite == "ideal")
        reports.push_back(gfa::run_ideal_suite(cfg));
    else
        reports.push_back(gfa::run_ring_suite(cfg));
    bool all_ok = true;
    for (const auto& r : reports) {
        std::cout << (r.passed() ? "pass" : "FAIL") << "  " << r.suite << "  instances="
                  << r.instances << " crosschecks=" << r.crosschecks
                  << " violations=" << r.violations << " max_error=" << r.max_error
                  << "\n";
        if (!r.passed()) {
            all_ok = false;
            std::cout << "      " << r.detail << "\n";
        }
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized-function algebra toolkit"};
    app.require_subcommand(1);

    std::string spec_file, out_dir = "gfa-out";
    std::optional<unsigned long long> seed;
    std::optional<long> nmax;
    bool parallel = false;
    auto* run = app.add_subcommand("run", "execute an experiment spec");
    run->add_option("spec", spec_file, "spec file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed, "override property-suite seeds");
    run->add_option("--nmax", nmax, "sampling budget cap");
    run->add_flag("--parallel", parallel, "run tasks concurrently");

    std::string check_file;
    auto* check = app.add_subcommand("check", "parse and validate a spec");
    check->add_option("spec", check_file, "spec file")->required();

    std::string fmt_file;
    auto* fmt = app.add_subcommand("fmt", "print a spec in canonical form");
    fmt->add_option("spec", fmt_file, "spec file")->required();

    std::string suite = "all";
    unsigned long long props_seed = 42;
    int instances = 1000, crosschecks = 50;
    auto* props = app.add_subcommand("props", "run built-in property suites");
    props->add_option("--suite", suite, "ultrametric|ideal|ring|scalar|all")
        ->check(CLI::IsMember({"ultrametric", "ideal", "ring", "scalar", "all"}));
    props->add_option("--seed", props_seed, "rng seed");
    props->add_option("--instances", instances, "instances per property");
    props->add_option("--crosschecks", crosschecks, "fitted cross-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(spec_file, out_dir, seed, nmax, parallel);
        if (check->parsed()) return cmd_check(check_file);
        if (fmt->parsed()) return cmd_fmt(fmt_file);
        return cmd_props(suite, props_seed, instances, crosschecks);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
