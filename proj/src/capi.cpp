#include "shockstab.h"

#include <cstring>
#include <string>

#include "shockstab/error.hpp"
#include "shockstab/scenario_io.hpp"
#include "shockstab/suite.hpp"

using shockstab::Error;
using shockstab::ErrorCode;

struct shockstab_scenario {
    shockstab::harness::ScenarioSpec spec;
};

struct shockstab_report {
    shockstab::monitor::StabilityReport report;
};

struct shockstab_suite_result {
    shockstab::harness::SuiteResult result;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return SHOCKSTAB_OK;
    } catch (const Error& e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const std::exception& e) {
        return fail(SHOCKSTAB_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(SHOCKSTAB_INTERNAL_ERROR, "unknown error");
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* shockstab_version(void) { return "1.0.0"; }

const char* shockstab_last_error(void) { return g_last_error.c_str(); }

void shockstab_string_free(char* s) { delete[] s; }

int shockstab_scenario_parse(const char* text, shockstab_scenario** out) {
    if (!text || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* handle = new shockstab_scenario{shockstab::harness::parse_scenario(text)};
        *out = handle;
    });
}

int shockstab_scenario_load(const char* path, shockstab_scenario** out) {
    if (!path || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* handle = new shockstab_scenario{shockstab::harness::load_scenario_file(path)};
        *out = handle;
    });
}

int shockstab_scenario_set_delta_rare(shockstab_scenario* scenario, double delta_rare) {
    if (!scenario) return fail(SHOCKSTAB_INPUT_ERROR, "null scenario");
    if (!(delta_rare > 0.0)) return fail(SHOCKSTAB_INPUT_ERROR, "delta_rare must be positive");
    scenario->spec.scenario.delta_rare = delta_rare;
    return SHOCKSTAB_OK;
}

const char* shockstab_scenario_id(const shockstab_scenario* scenario) {
    return scenario ? scenario->spec.scenario.id.c_str() : "";
}

const char* shockstab_scenario_output_dir(const shockstab_scenario* scenario) {
    return scenario ? scenario->spec.output_dir.c_str() : "";
}

void shockstab_scenario_free(shockstab_scenario* scenario) { delete scenario; }

int shockstab_run_report(const shockstab_scenario* scenario, shockstab_report** out) {
    if (!scenario || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* handle =
            new shockstab_report{shockstab::monitor::stability_report(scenario->spec.scenario)};
        *out = handle;
    });
}

int shockstab_report_passed(const shockstab_report* report) {
    return report && report->report.passed() ? 1 : 0;
}

int shockstab_report_json(const shockstab_report* report, char** out) {
    if (!report || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    return guarded([&] { *out = copy_string(shockstab::monitor::report_json(report->report)); });
}

int shockstab_report_ledger_csv(const shockstab_report* report, char** out) {
    if (!report || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    return guarded(
        [&] { *out = copy_string(shockstab::monitor::ledger_csv(report->report.ledger)); });
}

int shockstab_report_write_artifacts(const shockstab_report* report, const char* directory) {
    if (!report || !directory) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    return guarded([&] {
        shockstab::harness::SuiteResult wrapper;
        wrapper.reports.push_back(report->report);
        wrapper.passed = report->report.passed();
        shockstab::harness::emit_artifacts(wrapper, directory);
    });
}

void shockstab_report_free(shockstab_report* report) { delete report; }

int shockstab_suite_run(const char* name, uint64_t seed, int count, double delta_rare,
                        shockstab_suite_result** out) {
    if (!name || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    if (count < 0) return fail(SHOCKSTAB_INPUT_ERROR, "count must be nonnegative");
    *out = nullptr;
    return guarded([&] {
        shockstab::harness::SuiteOptions options;
        options.seed = seed;
        options.count = count;
        options.delta_rare = delta_rare;
        auto* handle = new shockstab_suite_result{
            shockstab::harness::run_suite(shockstab::harness::suite_from_string(name), options)};
        *out = handle;
    });
}

int shockstab_suite_passed(const shockstab_suite_result* result) {
    return result && result->result.passed ? 1 : 0;
}

int shockstab_suite_summary(const shockstab_suite_result* result, int as_json, char** out) {
    if (!result || !out) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    return guarded([&] {
        *out = copy_string(as_json ? shockstab::harness::suite_summary_json(result->result)
                                   : shockstab::harness::suite_summary_csv(result->result));
    });
}

int shockstab_suite_write_artifacts(const shockstab_suite_result* result, const char* directory) {
    if (!result || !directory) return fail(SHOCKSTAB_INPUT_ERROR, "null argument");
    return guarded([&] { shockstab::harness::emit_artifacts(result->result, directory); });
}

void shockstab_suite_result_free(shockstab_suite_result* result) { delete result; }

}  // extern "C"
