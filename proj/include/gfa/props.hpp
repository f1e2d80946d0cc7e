#pragma once

#include <string>
#include <vector>

#include "gfa/classify.hpp"

namespace gfa {

/// Randomized property suites over the certificate algebra, with fitted
/// cross-checks on instances whose exponent sequence is exactly linear in the
/// weight (LogScale, pure power growth), so the fit carries no model bias.
struct PropsConfig {
    unsigned long long seed = 42;
    int instances = 1000;
    int crosschecks = 50;
    double exponent_tol = 1e-6;    // exponent-domain slack
    double crosscheck_tol = 1e-2;  // fitted vs closed-form slack
    EvalBudget eval;
    TailFitPolicy policy;
};

struct SuiteReport {
    std::string suite;
    int instances = 0;
    int crosschecks = 0;
    int violations = 0;
    double max_error = 0.0;  // worst violation margin / cross-check gap seen
    std::string detail;      // first violation, if any
    bool passed() const { return violations == 0; }
};

/// Strong triangle inequality of the value and of the induced distance.
SuiteReport run_ultrametric_suite(const PropsConfig& cfg = {});
/// Invariance of the value under nonzero scalar multiples.
SuiteReport run_scalar_suite(const PropsConfig& cfg = {});
/// Absorption: negligible times moderate stays negligible.
SuiteReport run_ideal_suite(const PropsConfig& cfg = {});
/// Submultiplicativity plus ring identities (distributivity, associativity)
/// checked through quotient equality on scalar sequences.
SuiteReport run_ring_suite(const PropsConfig& cfg = {});

std::vector<SuiteReport> run_all_suites(const PropsConfig& cfg = {});

}  // namespace gfa
