#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "shockstab.h"

namespace {

const char* kTinyScenario =
    "id = capi_demo\n"
    "flux = burgers\n"
    "entropy = quadratic\n"
    "c_left = 1\n"
    "c_right = 0\n"
    "horizon = 1\n"
    "delta_rare = 0.02\n"
    "perturbation:\n"
    "  -1 0 0.4\n";

}  // namespace

TEST_CASE("version and error strings exist") {
    CHECK(shockstab_version() != nullptr);
    CHECK(shockstab_last_error() != nullptr);
}

TEST_CASE("scenario parsing through the C surface") {
    shockstab_scenario* sc = nullptr;
    REQUIRE(shockstab_scenario_parse(kTinyScenario, &sc) == SHOCKSTAB_OK);
    CHECK(std::string(shockstab_scenario_id(sc)) == "capi_demo");
    CHECK(shockstab_scenario_set_delta_rare(sc, 0.01) == SHOCKSTAB_OK);
    CHECK(shockstab_scenario_set_delta_rare(sc, -1.0) == SHOCKSTAB_INPUT_ERROR);
    shockstab_scenario_free(sc);

    shockstab_scenario* bad = nullptr;
    CHECK(shockstab_scenario_parse("c_left = 0\nc_right = 1\n", &bad) == SHOCKSTAB_INPUT_ERROR);
    CHECK(bad == nullptr);
    CHECK(std::strlen(shockstab_last_error()) > 0);

    CHECK(shockstab_scenario_load("/nonexistent/path.scn", &bad) == SHOCKSTAB_INPUT_ERROR);
    CHECK(shockstab_scenario_parse(nullptr, &bad) == SHOCKSTAB_INPUT_ERROR);
}

TEST_CASE("full report round trip through the C surface") {
    shockstab_scenario* sc = nullptr;
    REQUIRE(shockstab_scenario_parse(kTinyScenario, &sc) == SHOCKSTAB_OK);
    shockstab_report* report = nullptr;
    REQUIRE(shockstab_run_report(sc, &report) == SHOCKSTAB_OK);
    shockstab_scenario_free(sc);

    CHECK(shockstab_report_passed(report) == 1);

    char* json_text = nullptr;
    REQUIRE(shockstab_report_json(report, &json_text) == SHOCKSTAB_OK);
    const auto parsed = nlohmann::json::parse(json_text);
    CHECK(parsed["passed"] == true);
    CHECK(parsed["scenario"]["id"] == "capi_demo");
    CHECK(parsed["verdicts"].size() >= 7);
    shockstab_string_free(json_text);

    char* csv_text = nullptr;
    REQUIRE(shockstab_report_ledger_csv(report, &csv_text) == SHOCKSTAB_OK);
    CHECK(std::string(csv_text).rfind("time,E_total", 0) == 0);
    shockstab_string_free(csv_text);

    const auto dir = std::filesystem::temp_directory_path() / "shockstab_capi_artifacts";
    std::filesystem::remove_all(dir);
    REQUIRE(shockstab_report_write_artifacts(report, dir.string().c_str()) == SHOCKSTAB_OK);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "capi_demo_report.json"));
    CHECK(std::filesystem::exists(dir / "capi_demo_ledger.csv"));
    std::filesystem::remove_all(dir);

    shockstab_report_free(report);
}

TEST_CASE("suite execution through the C surface") {
    shockstab_suite_result* result = nullptr;
    REQUIRE(shockstab_suite_run("lemmas", 3, 50, 0.0, &result) == SHOCKSTAB_OK);
    CHECK(shockstab_suite_passed(result) == 1);

    char* summary = nullptr;
    REQUIRE(shockstab_suite_summary(result, 1, &summary) == SHOCKSTAB_OK);
    const auto parsed = nlohmann::json::parse(summary);
    CHECK(parsed["passed"] == true);
    CHECK(parsed["checks"].size() >= 1);
    shockstab_string_free(summary);

    REQUIRE(shockstab_suite_summary(result, 0, &summary) == SHOCKSTAB_OK);
    CHECK(std::string(summary).rfind("kind,name,pass,value", 0) == 0);
    shockstab_string_free(summary);

    shockstab_suite_result_free(result);

    CHECK(shockstab_suite_run("bogus", 1, 1, 0.0, &result) == SHOCKSTAB_INPUT_ERROR);
}
