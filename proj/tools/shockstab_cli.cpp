// Command-line driver for the shockstab shared library. Talks to the core
// exclusively through the C API in shockstab.h.

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "shockstab.h"

namespace {

int report_failure(int code) {
    std::fprintf(stderr, "error: %s\n", shockstab_last_error());
    return code;
}

void print_owned(char* text) {
    std::fputs(text, stdout);
    shockstab_string_free(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shockstab: stability certification for shock waves of scalar "
                 "convex conservation laws"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::string suite_name = "all";
    std::string format = "json";
    std::uint64_t seed = 1;
    int count = 5;
    double delta_rare = 0.0;

    CLI::App* run = app.add_subcommand("run", "Certify a single scenario file");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--out", out_dir, "Artifact output directory");
    run->add_option("--delta-rare", delta_rare, "Override rarefaction step size");
    run->add_option("--format", format, "Stdout format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* suite = app.add_subcommand("suite", "Run a certification suite");
    suite->add_option("--name", suite_name, "theorem|lemmas|oracle|all")
        ->check(CLI::IsMember({"theorem", "lemmas", "oracle", "all"}));
    suite->add_option("--seed", seed, "Randomization seed");
    suite->add_option("--count", count, "Scenarios (or lemma samples) per family");
    suite->add_option("--out", out_dir, "Artifact output directory");
    suite->add_option("--delta-rare", delta_rare, "Override rarefaction step size");
    suite->add_option("--format", format, "Stdout format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        shockstab_scenario* scenario = nullptr;
        int rc = shockstab_scenario_load(scenario_path.c_str(), &scenario);
        if (rc != SHOCKSTAB_OK) return report_failure(rc);
        if (out_dir.empty()) out_dir = shockstab_scenario_output_dir(scenario);
        if (delta_rare > 0.0) {
            rc = shockstab_scenario_set_delta_rare(scenario, delta_rare);
            if (rc != SHOCKSTAB_OK) {
                shockstab_scenario_free(scenario);
                return report_failure(rc);
            }
        }
        shockstab_report* report = nullptr;
        rc = shockstab_run_report(scenario, &report);
        shockstab_scenario_free(scenario);
        if (rc != SHOCKSTAB_OK) return report_failure(rc);

        char* text = nullptr;
        rc = format == "json" ? shockstab_report_json(report, &text)
                              : shockstab_report_ledger_csv(report, &text);
        if (rc == SHOCKSTAB_OK) print_owned(text);
        if (rc == SHOCKSTAB_OK && !out_dir.empty())
            rc = shockstab_report_write_artifacts(report, out_dir.c_str());
        const int passed = shockstab_report_passed(report);
        shockstab_report_free(report);
        if (rc != SHOCKSTAB_OK) return report_failure(rc);
        return passed ? 0 : SHOCKSTAB_VERDICT_FAILURE;
    }

    shockstab_suite_result* result = nullptr;
    int rc = shockstab_suite_run(suite_name.c_str(), seed, count, delta_rare, &result);
    if (rc != SHOCKSTAB_OK) return report_failure(rc);

    char* text = nullptr;
    rc = shockstab_suite_summary(result, format == "json" ? 1 : 0, &text);
    if (rc == SHOCKSTAB_OK) print_owned(text);
    if (rc == SHOCKSTAB_OK && !out_dir.empty())
        rc = shockstab_suite_write_artifacts(result, out_dir.c_str());
    const int passed = shockstab_suite_passed(result);
    shockstab_suite_result_free(result);
    if (rc != SHOCKSTAB_OK) return report_failure(rc);
    return passed ? 0 : SHOCKSTAB_VERDICT_FAILURE;
}
