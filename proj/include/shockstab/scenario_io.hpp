#ifndef SHOCKSTAB_SCENARIO_IO_HPP
#define SHOCKSTAB_SCENARIO_IO_HPP

#include <string>

#include "shockstab/scalar_solver.hpp"

namespace shockstab::harness {

/// A parsed scenario file: the solver scenario plus harness-only settings.
struct ScenarioSpec {
    solver::Scenario scenario;
    std::string flux_name = "burgers";
    std::string entropy_name = "quadratic_half";
    int godunov_cells = 0;  // 0 = unset
    std::string output_dir;
};

/// Parses the flat key/value + perturbation-table text format. Errors carry
/// the offending line number. Defaults: burgers flux, quadratic_half entropy,
/// C_L = 1, C_R = 0, horizon 10, delta_rare = 1e-3 (C_L - C_R), seed 0.
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario_file(const std::string& path);
std::string scenario_to_text(const ScenarioSpec& spec);

}  // namespace shockstab::harness

#endif
