/*
 * shockstab C API: scenario certification for scalar convex conservation
 * laws behind opaque handles.
 *
 * Every function that can fail returns a status code; the message for the
 * most recent failure on the calling thread is available from
 * shockstab_last_error(). Strings returned through char** outputs are
 * heap-allocated and must be released with shockstab_string_free().
 */
#ifndef SHOCKSTAB_H
#define SHOCKSTAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; identical to the CLI exit codes. */
#define SHOCKSTAB_OK 0
#define SHOCKSTAB_VERDICT_FAILURE 1
#define SHOCKSTAB_INPUT_ERROR 2
#define SHOCKSTAB_INTERNAL_ERROR 3

typedef struct shockstab_scenario shockstab_scenario;
typedef struct shockstab_report shockstab_report;
typedef struct shockstab_suite_result shockstab_suite_result;

const char* shockstab_version(void);
const char* shockstab_last_error(void);
void shockstab_string_free(char* s);

/* Scenario text format: flat key = value lines plus an optional
 * "perturbation:" table; see the project README. */
int shockstab_scenario_parse(const char* text, shockstab_scenario** out);
int shockstab_scenario_load(const char* path, shockstab_scenario** out);
int shockstab_scenario_set_delta_rare(shockstab_scenario* scenario, double delta_rare);
const char* shockstab_scenario_id(const shockstab_scenario* scenario);
/* The file's output_dir field; empty string when unset. */
const char* shockstab_scenario_output_dir(const shockstab_scenario* scenario);
void shockstab_scenario_free(shockstab_scenario* scenario);

/* Runs the full certification pipeline (front tracking, Filippov shift
 * curves, entropy ledger, verdicts). */
int shockstab_run_report(const shockstab_scenario* scenario, shockstab_report** out);
int shockstab_report_passed(const shockstab_report* report); /* 1 pass, 0 fail */
int shockstab_report_json(const shockstab_report* report, char** out);
int shockstab_report_ledger_csv(const shockstab_report* report, char** out);
int shockstab_report_write_artifacts(const shockstab_report* report, const char* directory);
void shockstab_report_free(shockstab_report* report);

/* Batch suites: name is one of theorem|lemmas|oracle|all.
 * delta_rare 0 keeps per-scenario defaults. */
int shockstab_suite_run(const char* name, uint64_t seed, int count, double delta_rare,
                        shockstab_suite_result** out);
int shockstab_suite_passed(const shockstab_suite_result* result); /* 1 pass, 0 fail */
int shockstab_suite_summary(const shockstab_suite_result* result, int as_json, char** out);
int shockstab_suite_write_artifacts(const shockstab_suite_result* result, const char* directory);
void shockstab_suite_result_free(shockstab_suite_result* result);

#ifdef __cplusplus
}
#endif

#endif /* SHOCKSTAB_H */
