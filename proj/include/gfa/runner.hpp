#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gfa/dsl.hpp"

namespace gfa {

struct RunOptions {
    std::optional<unsigned long long> seed;  // overrides verify-properties seeds
    std::optional<long> nmax;                // sampling cap, clamped to 1e7
    bool parallel = false;                   // per-task output files, no shared state
};

struct TaskOutcome {
    std::string name;    // file stem, e.g. "01-classify"
    std::string kind;
    std::string output;  // CSV filename inside the output directory
    std::string status;  // ok | inconclusive | failed | error
    std::string detail;
};

/// Exit code 0 when every verdict is conclusive and every suite passed,
/// 2 when some task came back Inconclusive, 1 on a falsified property or a
/// runtime error; 1 dominates 2.
struct RunReport {
    std::vector<TaskOutcome> outcomes;
    int exit_code = 0;
};

/// Materializes the declarations, runs the tasks in order, and writes one CSV
/// per task plus summary.csv into outdir (created if missing).
RunReport run_spec(const ExperimentSpec& spec, const std::filesystem::path& outdir,
                   const RunOptions& opts = {});

}  // namespace gfa
