#include "shockstab/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shockstab/error.hpp"

namespace shockstab::harness {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw input_error("line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) fail(line, "trailing characters after number '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + s + "'");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
    ScenarioSpec spec;
    solver::Scenario& sc = spec.scenario;
    sc.id = "scenario";
    sc.c_left = 1.0;
    sc.c_right = 0.0;
    sc.horizon = 10.0;
    sc.delta_rare = 0.0;  // filled from the default rule below when unset
    sc.seed = 0;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool in_table = false;
    std::vector<std::pair<int, solver::PerturbationInterval>> rows;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;

        if (!in_table) {
            if (s == "perturbation:") {
                in_table = true;
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected 'key = value' or 'perturbation:'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (value.empty()) fail(line, "missing value for '" + key + "'");
            if (key == "flux") spec.flux_name = value;
            else if (key == "entropy") spec.entropy_name = value;
            else if (key == "id") sc.id = value;
            else if (key == "c_left") sc.c_left = parse_number(value, line);
            else if (key == "c_right") sc.c_right = parse_number(value, line);
            else if (key == "horizon") sc.horizon = parse_number(value, line);
            else if (key == "delta_rare") sc.delta_rare = parse_number(value, line);
            else if (key == "seed") sc.seed = static_cast<std::uint64_t>(parse_number(value, line));
            else if (key == "godunov_cells")
                spec.godunov_cells = static_cast<int>(parse_number(value, line));
            else if (key == "output_dir") spec.output_dir = value;
            else fail(line, "unknown key '" + key + "'");
        } else {
            std::istringstream row(s);
            solver::PerturbationInterval p;
            if (!(row >> p.left >> p.right >> p.delta))
                fail(line, "perturbation row needs three numbers: left right delta");
            std::string extra;
            if (row >> extra) fail(line, "trailing characters in perturbation row");
            rows.emplace_back(line, p);
        }
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second.left < b.second.left; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [ln, p] = rows[i];
        if (!(p.left < p.right)) fail(ln, "perturbation interval is empty");
        if (i > 0 && rows[i - 1].second.right > p.left)
            fail(ln, "perturbation intervals overlap");
        sc.perturbation.push_back(p);
    }

    if (!(sc.c_left > sc.c_right)) throw input_error("scenario requires C_L > C_R");
    if (sc.delta_rare == 0.0) sc.delta_rare = 1e-3 * (sc.c_left - sc.c_right);
    sc.pair = calculus::make_pair(spec.flux_name, spec.entropy_name);
    sc.validate();
    return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_to_text(const ScenarioSpec& spec) {
    const auto& sc = spec.scenario;
    std::string out;
    out += "id = " + sc.id + "\n";
    out += "flux = " + spec.flux_name + "\n";
    out += "entropy = " + spec.entropy_name + "\n";
    out += "c_left = " + format_double(sc.c_left) + "\n";
    out += "c_right = " + format_double(sc.c_right) + "\n";
    out += "horizon = " + format_double(sc.horizon) + "\n";
    out += "delta_rare = " + format_double(sc.delta_rare) + "\n";
    out += "seed = " + std::to_string(sc.seed) + "\n";
    if (spec.godunov_cells > 0)
        out += "godunov_cells = " + std::to_string(spec.godunov_cells) + "\n";
    if (!sc.perturbation.empty()) {
        out += "perturbation:\n";
        for (const auto& p : sc.perturbation)
            out += "  " + format_double(p.left) + " " + format_double(p.right) + " " +
                   format_double(p.delta) + "\n";
    }
    return out;
}

}  // namespace shockstab::harness
