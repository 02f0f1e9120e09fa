#include "shockstab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "shockstab/error.hpp"
#include "shockstab/quadrature.hpp"

namespace shockstab::harness {

namespace {

double uniform_01(std::mt19937_64& rng) {
    // 53-bit mantissa; avoids distribution implementation differences.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_01(rng);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CheckResult check(const std::string& name, bool pass, double margin, const std::string& detail) {
    return CheckResult{name, pass, margin, detail};
}

}  // namespace

SuiteName suite_from_string(const std::string& name) {
    if (name == "theorem") return SuiteName::theorem;
    if (name == "lemmas") return SuiteName::lemmas;
    if (name == "oracle") return SuiteName::oracle;
    if (name == "all") return SuiteName::all;
    throw input_error("unknown suite '" + name + "' (expected theorem|lemmas|oracle|all)");
}

solver::Scenario random_scenario(const std::string& flux, const std::string& entropy,
                                 double c_left, double c_right, std::uint64_t seed,
                                 std::uint64_t index, double horizon, double delta_rare) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    solver::Scenario sc;
    sc.id = flux + "_" + entropy + "_s" + std::to_string(seed) + "_" + std::to_string(index);
    sc.pair = calculus::make_pair(flux, entropy);
    sc.c_left = c_left;
    sc.c_right = c_right;
    sc.horizon = horizon;
    sc.delta_rare = delta_rare;
    sc.seed = seed;

    const double strength = c_left - c_right;
    const int intervals = 1 + static_cast<int>(rng() % 8);
    std::vector<double> edges;
    while (static_cast<int>(edges.size()) < 2 * intervals) {
        const double x = uniform_in(rng, -5.0, 5.0);
        bool ok = true;
        for (double e : edges)
            if (std::abs(e - x) < 0.05) ok = false;
        if (ok) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    for (int k = 0; k < intervals; ++k) {
        solver::PerturbationInterval p;
        p.left = edges[2 * k];
        p.right = edges[2 * k + 1];
        double h = uniform_in(rng, -0.5 * strength, 0.5 * strength);
        if (std::abs(h) < 1e-3 * strength) h = std::copysign(1e-3 * strength, h == 0.0 ? 1.0 : h);
        p.delta = h;
        sc.perturbation.push_back(p);
    }
    return sc;
}

std::vector<ScenarioSpec> stock_scenarios() {
    auto spec = [](const std::string& id, const std::string& flux, const std::string& entropy,
                   double cl, double cr, std::vector<solver::PerturbationInterval> pert) {
        ScenarioSpec s;
        s.flux_name = flux;
        s.entropy_name = entropy;
        s.godunov_cells = 1024;
        s.scenario.id = id;
        s.scenario.pair = calculus::make_pair(flux, entropy);
        s.scenario.c_left = cl;
        s.scenario.c_right = cr;
        s.scenario.perturbation = std::move(pert);
        s.scenario.horizon = 10.0;
        s.scenario.delta_rare = 1e-3 * (cl - cr);
        return s;
    };
    return {
        spec("square_pulse", "burgers", "quadratic", 1.0, 0.0, {{-1.0, 0.0, 0.5}}),
        spec("two_bumps", "burgers", "quadratic_half", 1.0, 0.0,
             {{-3.0, -2.0, -0.4}, {-1.5, -0.5, 0.5}, {0.5, 1.5, 0.3}}),
        spec("offset_levels", "burgers", "quadratic", 0.5, -0.5,
             {{-2.0, -1.0, 0.45}, {1.0, 2.0, -0.3}}),
        spec("quartic_pulse", "quartic", "quartic_entropy", 1.0, 0.0,
             {{-1.0, 0.0, 0.5}, {1.0, 2.0, -0.25}}),
        spec("cosh_pulse", "cosh", "quadratic_half", 0.8, -0.2, {{-2.0, 0.0, 0.35}}),
    };
}

// ---------------------------------------------------------------------------
// Lemma suites
// ---------------------------------------------------------------------------

std::vector<CheckResult> lemma_gap_checks(std::uint64_t seed, int count) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
    double worst_gap_margin = 1.0;
    double worst_linear_residual = 0.0;
    bool pass = true;
    for (int k = 0; k < count; ++k) {
        const bool linear = (k % 4 == 0);
        // g = 1 + a(s - 1/2) + b(s^2 - 1/3): integrates to 1 by construction.
        const double a = uniform_in(rng, 0.1, 2.0);
        const double b = linear ? 0.0 : uniform_in(rng, -0.45 * a, 2.0 * a);
        // h with positive-coefficient derivative: h' >= c > 0.
        const double c = uniform_in(rng, 0.1, 3.0);
        const double d = linear ? 0.0 : uniform_in(rng, 0.0, 2.0);
        const double e = linear ? 0.0 : uniform_in(rng, 0.0, 2.0);

        calculus::SampledFn g{
            [=](double s) { return 1.0 + a * (s - 0.5) + b * (s * s - 1.0 / 3.0); },
            [=](double s) { return a + 2.0 * b * s; }};
        calculus::SampledFn h{
            [=](double s) { return c * s + d * s * s + e * s * s * s; },
            [=](double s) { return c + 2.0 * d * s + 3.0 * e * s * s; }};

        const auto r = calculus::monotone_gap(g, h);
        const double margin = r.gap - (r.bound - 1e-10);
        if (margin < 0.0) pass = false;
        worst_gap_margin = std::min(worst_gap_margin, r.gap - r.bound);
        if (linear) {
            const double residual = std::abs(r.gap - r.bound);
            worst_linear_residual = std::max(worst_linear_residual, residual);
            if (residual > 1e-12) pass = false;
        }
    }
    out.push_back(check("lemma_gap_randomized", pass, -worst_gap_margin,
                        std::to_string(count) + " pairs, worst gap-bound " +
                            format_double(worst_gap_margin) + ", worst linear residual " +
                            format_double(worst_linear_residual)));
    return out;
}

std::vector<CheckResult> lemma_gradient_checks() {
    std::vector<CheckResult> out;
    const double lo = -3.0, hi = 3.0;
    const int points = 10000;
    // Low-discrepancy 2D lattice (R2 sequence): deterministic quasi-random.
    const double a1 = 0.7548776662466927;
    const double a2 = 0.5698402909980532;

    for (const auto& flux : calculus::flux_names()) {
        for (const auto& entropy : calculus::entropy_names()) {
            const auto pair = calculus::make_pair(flux, entropy);
            const auto box = calculus::bounds_on_box(pair, lo, hi);
            double worst_low = 0.0;   // violation of df_dU >= 0
            double worst_up = 0.0;    // violation of df_dU <= L_fU
            double worst_c = 0.0;     // violation of df_dC >= eps_fC
            for (int k = 1; k <= points; ++k) {
                const double u = lo + (hi - lo) * std::fmod(a1 * k, 1.0);
                const double c = lo + (hi - lo) * std::fmod(a2 * k, 1.0);
                const auto g = calculus::normalized_flux_grad(pair, u, c);
                worst_low = std::max(worst_low, -g.df_dU);
                worst_up = std::max(worst_up, g.df_dU - box.L_fU);
                worst_c = std::max(worst_c, box.eps_fC - g.df_dC);
            }
            const double margin = std::max({worst_low, worst_up, worst_c});
            out.push_back(check("lemma_gradient_bounds[" + pair.name + "]", margin <= 1e-8,
                                margin,
                                "df_dU in [0, " + format_double(box.L_fU) + "], df_dC >= " +
                                    format_double(box.eps_fC)));
        }
    }
    return out;
}

std::vector<CheckResult> closed_form_oracle_checks() {
    std::vector<CheckResult> out;
    const auto pair = calculus::make_pair("burgers", "quadratic_half");
    const double a1 = 0.7548776662466927;
    const double a2 = 0.5698402909980532;
    double worst_f = 0.0, worst_F = 0.0;
    for (int k = 1; k <= 10000; ++k) {
        const double u = -3.0 + 6.0 * std::fmod(a1 * k, 1.0);
        const double c = -3.0 + 6.0 * std::fmod(a2 * k, 1.0);
        const double f_exact = (2.0 * u + c) / 3.0;
        const double F_exact = (2.0 * u * u * u - 3.0 * c * u * u + c * c * c) / 6.0;
        worst_f = std::max(worst_f,
                           std::abs(calculus::normalized_flux_quadrature(pair, u, c) - f_exact));
        worst_F = std::max(worst_F,
                           std::abs(calculus::rel_entropy_flux_quadrature(pair, u, c) - F_exact));
    }
    const double margin = std::max(worst_f, worst_F);
    out.push_back(check("closed_form_oracle", margin <= 1e-9, margin,
                        "max |f_quad - f_exact| = " + format_double(worst_f) +
                            ", max |F_quad - F_exact| = " + format_double(worst_F)));
    return out;
}

std::vector<CheckResult> solver_oracle_checks(const ScenarioSpec& spec) {
    std::vector<CheckResult> out;
    const auto& sc = spec.scenario;
    const std::string tag = "[" + sc.id + "]";
    const int cells = spec.godunov_cells > 0 ? spec.godunov_cells : 1024;

    const auto profile0 = solver::discretize_initial(sc);
    const auto evolution = solver::evolve_logged(profile0, sc.pair, sc.horizon, sc.delta_rare);
    const auto& final_profile = evolution.profile;

    // Rankine-Hugoniot residual at every front of the final profile.
    double worst_rh = 0.0;
    for (const auto& f : final_profile.fronts) {
        const double resid = std::abs(f.speed * (f.right_state - f.left_state) -
                                      (sc.pair.flux(f.right_state) - sc.pair.flux(f.left_state)));
        worst_rh = std::max(worst_rh, resid);
    }
    out.push_back(check("rankine_hugoniot_residual" + tag, worst_rh <= 1e-12, worst_rh, ""));

    // Conservation of int (U - phi(. - sigma t)) over a window containing
    // every wave and the reference shock through the whole run.
    const double sigma = sc.sigma();
    double support_lo = 0.0, support_hi = 0.0;
    for (const auto& p : sc.perturbation) {
        support_lo = std::min(support_lo, p.left);
        support_hi = std::max(support_hi, p.right);
    }
    double wave_speed = std::abs(sigma);
    for (int k = 0; k <= 256; ++k) {
        const double u =
            sc.min_initial() + (sc.max_initial() - sc.min_initial()) * k / 256.0;
        wave_speed = std::max(wave_speed, std::abs(sc.pair.flux_deriv(u)));
    }
    const double w_lo = support_lo - 1.05 * wave_speed * sc.horizon - 1.0;
    const double w_hi = support_hi + 1.05 * wave_speed * sc.horizon + 1.0;
    auto mass_vs_shock = [&](const solver::PiecewiseConstantProfile& p) {
        const double shock_pos = sigma * p.time;
        auto phi_mass = [&](double a, double b) {
            const double cut = std::clamp(shock_pos, a, b);
            return sc.c_left * (cut - a) + sc.c_right * (b - cut);
        };
        double sum = 0.0;
        double lo = w_lo;
        double u = solver::trace(p, w_lo, solver::Side::right);
        for (const auto& f : p.fronts) {
            if (f.position <= w_lo) continue;
            if (f.position >= w_hi) break;
            sum += u * (f.position - lo) - phi_mass(lo, f.position);
            lo = f.position;
            u = f.right_state;
        }
        sum += u * (w_hi - lo) - phi_mass(lo, w_hi);
        return sum;
    };
    double drift = 0.0;
    {
        solver::LogReplayer replayer(evolution.log);
        double m0 = 0.0;
        bool first = true;
        for (double t : {0.0, 0.25 * sc.horizon, 0.5 * sc.horizon, 0.75 * sc.horizon, sc.horizon}) {
            const double m = mass_vs_shock(replayer.profile_at(t));
            if (first) {
                m0 = m;
                first = false;
            }
            drift = std::max(drift, std::abs(m - m0));
        }
    }
    out.push_back(check("conservation_drift" + tag, drift <= 1e-10, drift, ""));

    // Oleinik decay quotient.
    const double ratio = solver::oleinik_ratio(final_profile, sc.pair);
    out.push_back(check("oleinik_ratio" + tag, ratio <= 1.0 + 10.0 * sc.delta_rare,
                        ratio - 1.0, "ratio " + format_double(ratio)));

    // Godunov cross-validation.
    const auto grid = solver::godunov_reference(sc, cells, 0.5);
    const double width = grid.x_right() - grid.x_left;
    const double l1 = solver::compare_profiles(final_profile, grid, solver::Metric::L1,
                                               {grid.x_left, grid.x_right()});
    const double budget = 5.0 * width / cells;
    out.push_back(check("godunov_l1" + tag, l1 <= budget, l1 - budget,
                        "L1 " + format_double(l1) + " budget " + format_double(budget)));
    return out;
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

SuiteResult run_suite(SuiteName name, const SuiteOptions& options) {
    SuiteResult result;
    const bool theorem = name == SuiteName::theorem || name == SuiteName::all;
    const bool lemmas = name == SuiteName::lemmas || name == SuiteName::all;
    const bool oracle = name == SuiteName::oracle || name == SuiteName::all;

    if (theorem) {
        struct Family {
            const char* flux;
            const char* entropy;
        };
        for (const Family fam : {Family{"burgers", "quadratic"}, Family{"quartic", "quartic_entropy"}}) {
            for (int k = 0; k < options.count; ++k) {
                solver::Scenario sc = random_scenario(
                    fam.flux, fam.entropy, 1.0, 0.0, options.seed, static_cast<std::uint64_t>(k),
                    options.horizon > 0.0 ? options.horizon : 10.0,
                    options.delta_rare > 0.0 ? options.delta_rare : 1e-3);
                const auto start = std::chrono::steady_clock::now();
                result.reports.push_back(monitor::stability_report(sc));
                const auto stop = std::chrono::steady_clock::now();
                result.wall_ms.push_back(
                    std::chrono::duration<double, std::milli>(stop - start).count());
            }
        }
    }
    if (lemmas) {
        for (auto& c : lemma_gap_checks(options.seed, options.count)) result.checks.push_back(c);
        for (auto& c : lemma_gradient_checks()) result.checks.push_back(c);
    }
    if (oracle) {
        for (auto& c : closed_form_oracle_checks()) result.checks.push_back(c);
        for (auto& spec : stock_scenarios()) {
            ScenarioSpec s = spec;
            if (options.delta_rare > 0.0) s.scenario.delta_rare = options.delta_rare;
            if (options.horizon > 0.0) s.scenario.horizon = options.horizon;
            for (auto& c : solver_oracle_checks(s)) result.checks.push_back(c);
        }
    }

    result.passed = true;
    for (const auto& r : result.reports)
        if (!r.passed()) result.passed = false;
    for (const auto& c : result.checks)
        if (!c.pass) result.passed = false;
    return result;
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::vector<ManifestEntry> emit_artifacts(const SuiteResult& result,
                                          const std::string& directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw input_error("cannot create output directory '" + directory + "'");

    std::vector<ManifestEntry> manifest;
    auto write = [&](const std::string& name, const std::string& content) {
        const fs::path path = fs::path(directory) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw input_error("cannot write '" + path.string() + "'");
        out << content;
        out.close();
        manifest.push_back({name, content.size(), hex64(fnv1a64(content))});
    };

    for (const auto& rep : result.reports) {
        write(rep.scenario_id + "_report.json", monitor::report_json(rep));
        write(rep.scenario_id + "_ledger.csv", monitor::ledger_csv(rep.ledger));
        const char* tags[3] = {"t0", "tmid", "tend"};
        for (std::size_t k = 0; k < rep.snapshots.size() && k < 3; ++k)
            write(rep.scenario_id + "_profile_" + tags[k] + ".csv",
                  monitor::profile_csv(rep.snapshots[k]));
        write(rep.scenario_id + "_curve_left.csv", monitor::curve_csv(rep.curve_left));
        write(rep.scenario_id + "_curve_right.csv", monitor::curve_csv(rep.curve_right));
    }
    if (!result.checks.empty()) {
        std::string csv = "name,pass,margin,detail\n";
        for (const auto& c : result.checks)
            csv += c.name + "," + (c.pass ? "1" : "0") + "," + format_double(c.margin) + ",\"" +
                   c.detail + "\"\n";
        write("checks.csv", csv);
    }
    write("summary.json", suite_summary_json(result));

    std::sort(manifest.begin(), manifest.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });
    nlohmann::ordered_json j;
    j["schema"] = "shockstab-manifest-v1";
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& m : manifest)
        j["files"].push_back({{"name", m.name}, {"bytes", m.bytes}, {"fnv1a64", m.fnv1a64}});
    const std::string manifest_text = j.dump(2) + "\n";
    {
        std::ofstream out(fs::path(directory) / "manifest.json", std::ios::binary);
        out << manifest_text;
    }
    return manifest;
}

std::string suite_summary_json(const SuiteResult& result) {
    nlohmann::ordered_json j;
    j["schema"] = "shockstab-suite-v1";
    j["passed"] = result.passed;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto& r : result.reports) {
        int failed = 0;
        for (const auto& v : r.verdicts)
            if (!v.pass) ++failed;
        reports.push_back({{"id", r.scenario_id},
                           {"passed", r.passed()},
                           {"failed_verdicts", failed},
                           {"initial_l2", r.initial_l2},
                           {"max_crossing", r.max_crossing}});
    }
    j["reports"] = reports;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : result.checks)
        checks.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

std::string suite_summary_csv(const SuiteResult& result) {
    std::string out = "kind,name,pass,value\n";
    for (const auto& r : result.reports)
        out += "report," + r.scenario_id + "," + (r.passed() ? "1" : "0") + "," +
               format_double(r.max_crossing) + "\n";
    for (const auto& c : result.checks)
        out += "check," + c.name + "," + (c.pass ? "1" : "0") + "," + format_double(c.margin) +
               "\n";
    out += std::string("aggregate,passed,") + (result.passed ? "1" : "0") + ",\n";
    return out;
}

}  // namespace shockstab::harness
