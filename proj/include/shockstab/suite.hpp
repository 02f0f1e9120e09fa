#ifndef SHOCKSTAB_SUITE_HPP
#define SHOCKSTAB_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shockstab/entropy_monitor.hpp"
#include "shockstab/scenario_io.hpp"

namespace shockstab::harness {

enum class SuiteName { theorem, lemmas, oracle, all };

SuiteName suite_from_string(const std::string& name);

struct SuiteOptions {
    std::uint64_t seed = 1;
    int count = 5;
    double delta_rare = 0.0;  // 0 = per-scenario default
    double horizon = 0.0;     // 0 = per-scenario default
};

/// One named check with its margin (quantity minus bound; <= 0 passes unless
/// stated otherwise in detail).
struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct SuiteResult {
    std::vector<monitor::StabilityReport> reports;
    std::vector<CheckResult> checks;
    std::vector<double> wall_ms;  // per report, same order
    bool passed = false;
};

/// Deterministic randomized perturbation scenario: up to 8 disjoint intervals
/// with support in [-5, 5] and heights within half the shock strength.
solver::Scenario random_scenario(const std::string& flux, const std::string& entropy,
                                 double c_left, double c_right, std::uint64_t seed,
                                 std::uint64_t index, double horizon, double delta_rare);

/// The fixed scenarios driven by the oracle suite and the CLI examples.
std::vector<ScenarioSpec> stock_scenarios();

SuiteResult run_suite(SuiteName name, const SuiteOptions& options);

/// Lemma and oracle check groups, reusable individually.
std::vector<CheckResult> lemma_gap_checks(std::uint64_t seed, int count);
std::vector<CheckResult> lemma_gradient_checks();
std::vector<CheckResult> closed_form_oracle_checks();
std::vector<CheckResult> solver_oracle_checks(const ScenarioSpec& spec);

struct ManifestEntry {
    std::string name;
    std::uint64_t bytes = 0;
    std::string fnv1a64;  // content hash, hex
};

/// Writes ledgers, reports, profile snapshots, curves, a summary and a
/// manifest into `directory`; returns the manifest. Byte-identical output
/// for identical inputs.
std::vector<ManifestEntry> emit_artifacts(const SuiteResult& result, const std::string& directory);

std::string suite_summary_json(const SuiteResult& result);
std::string suite_summary_csv(const SuiteResult& result);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace shockstab::harness

#endif
