#include "shockstab/entropy_monitor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "shockstab/error.hpp"

namespace shockstab::monitor {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kCrossingTol = 1e-9;

// Contribution of a constant weight over cell ∩ window with +-infinity ends.
double piece(double weight, double cell_lo, double cell_hi, double win_lo, double win_hi) {
    if (weight == 0.0) return 0.0;
    const double lo = std::max(cell_lo, win_lo);
    const double hi = std::min(cell_hi, win_hi);
    if (!(hi > lo)) return 0.0;
    if (std::isinf(hi) || std::isinf(lo))
        throw input_error("far field is not settled at the anchor state");
    return weight * (hi - lo);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* policy_name(tracking::XbarPolicy p) {
    switch (p) {
        case tracking::XbarPolicy::left: return "left";
        case tracking::XbarPolicy::right: return "right";
        case tracking::XbarPolicy::midpoint: return "midpoint";
    }
    return "?";
}

double sample_max(const std::function<double(double)>& f, double lo, double hi, int n) {
    double best = -kInfinity;
    for (int k = 0; k < n; ++k) best = std::max(best, f(lo + (hi - lo) * k / (n - 1)));
    return best;
}

bool entropy_is_quadratic(const calculus::FluxEntropyPair& pair) {
    for (double x : {-1.3, 0.7, 2.1})
        if (std::abs(pair.entropy(x) - x * x) > 1e-12) return false;
    return true;
}

// Measure of {s in [a,b] : xR'(s) - xL'(s) >= 0} from the piecewise-constant
// curve speeds.
double dissipation_set_measure(const tracking::ShiftCurve& left, const tracking::ShiftCurve& right,
                               double a, double b) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a, b};
    for (const auto& bp : left.breakpoints)
        if (bp.time > a && bp.time < b) cuts.push_back(bp.time);
    for (const auto& bp : right.breakpoints)
        if (bp.time > a && bp.time < b) cuts.push_back(bp.time);
    std::sort(cuts.begin(), cuts.end());
    double measure = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (right.speed_at(mid) - left.speed_at(mid) >= 0.0) measure += cuts[i + 1] - cuts[i];
    }
    return measure;
}

struct WorstMargin {
    double margin = -kInfinity;
    double time = 0.0;
    void offer(double m, double t) {
        if (m > margin) {
            margin = m;
            time = t;
        }
    }
};

Verdict make_verdict(const std::string& name, const WorstMargin& w, double tolerance,
                     bool vacuous = false) {
    Verdict v;
    v.name = name;
    v.vacuous = vacuous;
    v.tolerance = tolerance;
    if (vacuous || w.margin == -kInfinity) {
        v.pass = true;
        v.worst_margin = 0.0;
        v.worst_time = 0.0;
        v.vacuous = true;
        return v;
    }
    v.worst_margin = w.margin;
    v.worst_time = w.time;
    v.pass = w.margin <= tolerance;
    return v;
}

}  // namespace

bool StabilityReport::passed() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

double total_relative_entropy(const solver::PiecewiseConstantProfile& profile, double x_L,
                              double x_R, const calculus::FluxEntropyPair& pair, double c_left,
                              double c_right) {
    double sum = 0.0;
    double lo = -kInfinity;
    double u = profile.leftmost_state;
    auto cell = [&](double hi) {
        sum += piece(calculus::rel_entropy(pair, u, c_left), lo, hi, -kInfinity, x_L);
        sum += piece(calculus::rel_entropy(pair, u, c_right), lo, hi, x_R, kInfinity);
    };
    for (const auto& f : profile.fronts) {
        cell(f.position);
        lo = f.position;
        u = f.right_state;
    }
    cell(kInfinity);
    return sum;
}

double inner_relative_entropy(const solver::PiecewiseConstantProfile& profile, double x_L,
                              double x_R, const calculus::FluxEntropyPair& pair, double C) {
    if (!(x_L < x_R)) return 0.0;
    double sum = 0.0;
    double lo = -kInfinity;
    double u = profile.leftmost_state;
    for (const auto& f : profile.fronts) {
        sum += piece(calculus::rel_entropy(pair, u, C), lo, f.position, x_L, x_R);
        lo = f.position;
        u = f.right_state;
    }
    sum += piece(calculus::rel_entropy(pair, u, C), lo, kInfinity, x_L, x_R);
    return sum;
}

double dissipation_constant(const calculus::FluxEntropyPair&, const calculus::BoundsBox& box,
                            double c_left, double c_right, double C) {
    if (!(c_right < C && C < c_left))
        throw input_error("dissipation_constant: anchor must lie strictly between C_R and C_L");
    const double K = std::min(c_left - C, C - c_right);
    const double kappa_eta = 0.5 * box.eps_eta;
    const double q = box.eps_fC / (2.0 * box.L_fU) * (c_left - c_right);
    return box.eps_fC * K * kappa_eta * q * q;
}

double shift_bound_lambda(const solver::Scenario& scenario, const calculus::BoundsBox& box,
                          double curve_lipschitz) {
    const double sigma = std::abs(scenario.sigma());
    const double L = curve_lipschitz;
    const double M = box.sup_Aprime;
    return (std::sqrt(2.0 * box.L_eta / box.eps_eta * (L + sigma)) +
            std::sqrt(2.0 * (M + L + sigma))) /
           (scenario.c_left - scenario.c_right);
}

double entropy_tolerance(const solver::Scenario& scenario, const calculus::BoundsBox& box) {
    const double sup0 = scenario.sup_initial();
    return 10.0 * scenario.delta_rare * (1.0 + scenario.horizon) * box.L_eta * sup0 * sup0;
}

StabilityReport stability_report(const solver::Scenario& scenario, tracking::XbarPolicy policy) {
    scenario.validate();
    const auto& pair = scenario.pair;

    StabilityReport rep;
    rep.scenario_id = scenario.id;
    rep.pair_name = pair.name;
    rep.c_left = scenario.c_left;
    rep.c_right = scenario.c_right;
    rep.horizon = scenario.horizon;
    rep.delta_rare = scenario.delta_rare;
    rep.sigma = scenario.sigma();
    rep.policy = policy;
    rep.initial_l2 = scenario.initial_l2();

    const auto profile0 = solver::discretize_initial(scenario);
    auto evolution = solver::evolve_logged(profile0, pair, scenario.horizon, scenario.delta_rare);
    const auto& log = evolution.log;

    const auto shift =
        tracking::track_shift_pair(log, pair, scenario.c_left, scenario.c_right, rep.sigma, policy);
    rep.max_crossing = shift.max_crossing;
    rep.curve_left = shift.left;
    rep.curve_right = shift.right;

    // Constants on the padded state box.
    const double radius =
        scenario.sup_initial() + std::max(std::abs(scenario.c_left), std::abs(scenario.c_right));
    rep.box = calculus::bounds_on_box(pair, -radius, radius);
    {
        double lo = kInfinity, hi = -kInfinity;
        const int n = 129;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double u = -radius + 2.0 * radius * i / (n - 1);
                const double c = -radius + 2.0 * radius * j / (n - 1);
                const double f = std::abs(calculus::normalized_flux(pair, u, c));
                lo = std::min(lo, f);
                hi = std::max(hi, f);
            }
        rep.curve_lipschitz = hi + 0.01 * (hi - lo);
    }
    rep.anchor_mid = 0.5 * (scenario.c_left + scenario.c_right);
    rep.lambda_dissipation =
        dissipation_constant(pair, rep.box, scenario.c_left, scenario.c_right, rep.anchor_mid);
    {
        const double M1 = 2.0 * rep.curve_lipschitz;
        const double M2 = 1.01 * sample_max(
            [&](double u) { return calculus::rel_entropy(pair, u, rep.anchor_mid); }, -radius,
            radius, 513);
        rep.kappa = 1.0 + M1 * M2 / rep.lambda_dissipation;
    }
    rep.lambda_shift = shift_bound_lambda(scenario, rep.box, rep.curve_lipschitz);
    rep.tol_entropy = entropy_tolerance(scenario, rep.box);

    const double T = scenario.horizon;
    rep.xbar_final_left = shift.left.position(T) - rep.sigma * T;
    rep.xbar_final_right = shift.right.position(T) - rep.sigma * T;
    rep.xbar_final_mid = 0.5 * (rep.xbar_final_left + rep.xbar_final_right);

    // Ledger sample times: all solver and curve events plus uniform samples.
    std::vector<double> times;
    for (const auto& e : log.events) times.push_back(e.time);
    for (const auto& bp : shift.left.breakpoints) times.push_back(bp.time);
    for (const auto& bp : shift.right.breakpoints) times.push_back(bp.time);
    const int uniform = 200;
    for (int k = 0; k <= uniform; ++k) times.push_back(T * k / uniform);
    std::sort(times.begin(), times.end());
    std::vector<double> sample_times;
    for (double t : times) {
        if (t < 0.0 || t > T) continue;
        if (!sample_times.empty() && t - sample_times.back() <= 1e-12 * (1.0 + std::abs(t)))
            continue;
        sample_times.push_back(t);
    }
    if (sample_times.empty()) sample_times.push_back(0.0);

    // Far fields must sit exactly at the anchors (the solver preserves the
    // outer states bit-exactly); then the unbounded end cells carry zero
    // weight in every integral below.
    if (log.leftmost_state != scenario.c_left ||
        profile0.rightmost_state() != scenario.c_right)
        throw input_error("far field is not settled at the anchor states");

    // Per-front caches of the integrand weights (cell state = right_state).
    solver::LogReplayer replayer(log);
    const std::int64_t n_records = replayer.total_records();
    struct Weights {
        double eta_L, eta_R, eta_M, q_L, q_R;
    };
    std::vector<Weights> cache(n_records);
    std::vector<char> cached(n_records, 0);
    auto weights_of = [&](std::int64_t id) -> const Weights& {
        if (!cached[id]) {
            const double u = replayer.record(id).right_state;
            cache[id] = {calculus::rel_entropy(pair, u, scenario.c_left),
                         calculus::rel_entropy(pair, u, scenario.c_right),
                         calculus::rel_entropy(pair, u, rep.anchor_mid),
                         (u - scenario.c_left) * (u - scenario.c_left),
                         (u - scenario.c_right) * (u - scenario.c_right)};
            cached[id] = 1;
        }
        return cache[id];
    };
    const Weights left_end{0.0, calculus::rel_entropy(pair, scenario.c_left, scenario.c_right),
                           calculus::rel_entropy(pair, scenario.c_left, rep.anchor_mid), 0.0,
                           (scenario.c_left - scenario.c_right) *
                               (scenario.c_left - scenario.c_right)};

    rep.ledger.rows.reserve(sample_times.size());
    for (double t : sample_times) {
        replayer.advance_to(t);
        LedgerRow row;
        row.time = t;
        row.xL = shift.left.position(t);
        row.xR = shift.right.position(t);
        row.xbar = shift.xbar.position(t);
        const double p = rep.sigma * t + row.xbar;

        double e_total = 0.0, e_inner = 0.0, eta_shift = 0.0, l2sq = 0.0;
        // Zero weights skip before the length is formed: the unbounded end
        // cells would otherwise produce 0 * inf.
        auto add = [](double& acc, double weight, double a, double b) {
            if (weight != 0.0 && b > a) acc += weight * (b - a);
        };
        double lo = -kInfinity;
        const Weights* w = &left_end;
        std::int64_t id = replayer.first();
        while (true) {
            const double hi = id >= 0 ? replayer.record(id).position_at(t) : kInfinity;
            if (hi > lo) {
                add(e_total, w->eta_L, lo, std::min(hi, row.xL));
                add(e_total, w->eta_R, std::max(lo, row.xR), hi);
                if (row.xL < row.xR)
                    add(e_inner, w->eta_M, std::max(lo, row.xL), std::min(hi, row.xR));
                add(eta_shift, w->eta_L, lo, std::min(hi, p));
                add(eta_shift, w->eta_R, std::max(lo, p), hi);
                add(l2sq, w->q_L, lo, std::min(hi, p));
                add(l2sq, w->q_R, std::max(lo, p), hi);
            }
            if (id < 0) break;
            lo = hi;
            w = &weights_of(id);
            id = replayer.next(id);
        }
        row.E_total = e_total;
        row.E_inner = e_inner;
        row.eta_shifted = eta_shift;
        row.l2_shifted = std::sqrt(l2sq);
        if (!rep.ledger.rows.empty())
            row.s_measure =
                dissipation_set_measure(shift.left, shift.right, rep.ledger.rows.back().time, t);
        rep.ledger.rows.push_back(row);
    }
    rep.initial_entropy = rep.ledger.rows.front().E_total;

    // Snapshots for artifact emission.
    {
        solver::LogReplayer snap(log);
        rep.snapshots.push_back(snap.profile_at(0.0));
        rep.snapshots.push_back(snap.profile_at(0.5 * T));
        rep.snapshots.push_back(snap.profile_at(T));
    }

    // --- verdicts ---------------------------------------------------------
    const auto& rows = rep.ledger.rows;
    const double E0 = rep.initial_entropy;

    WorstMargin total_bounded, monotone, vs_shift, l2_contract, crossing, sqrt_bound;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        total_bounded.offer(r.E_total - E0, r.time);
        if (k > 0) monotone.offer(r.E_total - rows[k - 1].E_total, r.time);
        vs_shift.offer(r.eta_shifted - E0, r.time);
        l2_contract.offer(r.l2_shifted - rep.initial_l2, r.time);
        crossing.offer(r.xR - r.xL, r.time);
        sqrt_bound.offer(std::abs(r.xbar) - rep.lambda_shift * rep.initial_l2 * std::sqrt(r.time),
                         r.time);
    }

    rep.verdicts.push_back(make_verdict("entropy_total_bounded", total_bounded, rep.tol_entropy));
    rep.verdicts.push_back(make_verdict("entropy_monotone", monotone, rep.tol_entropy));
    rep.verdicts.push_back(make_verdict("entropy_vs_shifted_shock", vs_shift, rep.tol_entropy));
    rep.verdicts.push_back(make_verdict("l2_contraction", l2_contract, rep.tol_entropy,
                                        !entropy_is_quadratic(pair)));
    rep.verdicts.push_back(make_verdict("non_crossing", crossing, kCrossingTol));
    rep.verdicts.push_back(make_verdict("shift_sqrt_bound", sqrt_bound, 0.0));

    // Interval dissipation and its containment corollary apply only while
    // the pair is strictly separated, which the non-crossing property rules
    // out; both checks are expected to report vacuous.
    WorstMargin dissipation;
    bool separated_interval = false;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double sep_a = rows[k - 1].xR - rows[k - 1].xL;
        const double sep_b = rows[k].xR - rows[k].xL;
        if (sep_a > kCrossingTol && sep_b > kCrossingTol) {
            separated_interval = true;
            dissipation.offer(rows[k].E_inner - rows[k - 1].E_inner +
                                  rep.lambda_dissipation * rows[k].s_measure,
                              rows[k].time);
        }
    }
    rep.verdicts.push_back(
        make_verdict("dissipation_interval", dissipation, rep.tol_entropy, !separated_interval));

    WorstMargin containment;
    double max_sep = 0.0;
    for (const auto& r : rows) max_sep = std::max(max_sep, r.xR - r.xL);
    const bool ever_separated = max_sep > kCrossingTol;
    if (ever_separated) {
        const double delta0 = std::max(kCrossingTol, max_sep / (2.0 * rep.kappa));
        bool active = false;
        for (const auto& r : rows) {
            const double sep = r.xR - r.xL;
            if (sep >= delta0) active = true;
            if (active) containment.offer(sep - rep.kappa * delta0, r.time);
            if (sep < delta0) active = false;
        }
    }
    rep.verdicts.push_back(
        make_verdict("separation_containment", containment, rep.tol_entropy, !ever_separated));

    return rep;
}

std::string report_json(const StabilityReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = "shockstab-report-v1";
    j["scenario"] = {{"id", rep.scenario_id},   {"pair", rep.pair_name},
                     {"c_left", rep.c_left},    {"c_right", rep.c_right},
                     {"horizon", rep.horizon},  {"delta_rare", rep.delta_rare},
                     {"sigma", rep.sigma}};
    j["initial_l2"] = rep.initial_l2;
    j["initial_entropy"] = rep.initial_entropy;
    j["tol_entropy"] = rep.tol_entropy;
    j["box"] = {{"lower", rep.box.lower},     {"upper", rep.box.upper},
                {"eps_A", rep.box.eps_A},     {"L_A", rep.box.L_A},
                {"eps_eta", rep.box.eps_eta}, {"L_eta", rep.box.L_eta},
                {"eps_fC", rep.box.eps_fC},   {"L_fU", rep.box.L_fU},
                {"sup_Aprime", rep.box.sup_Aprime}};
    j["curve_lipschitz"] = rep.curve_lipschitz;
    j["lambda_dissipation"] = rep.lambda_dissipation;
    j["kappa"] = rep.kappa;
    j["lambda_shift"] = rep.lambda_shift;
    j["anchor_mid"] = rep.anchor_mid;
    j["xbar_policy"] = policy_name(rep.policy);
    j["xbar_final"] = {{"left", rep.xbar_final_left},
                       {"right", rep.xbar_final_right},
                       {"midpoint", rep.xbar_final_mid}};
    j["max_crossing"] = rep.max_crossing;
    j["ledger_rows"] = rep.ledger.rows.size();
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const auto& v : rep.verdicts)
        verdicts.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"vacuous", v.vacuous},
                            {"worst_margin", v.worst_margin},
                            {"worst_time", v.worst_time},
                            {"tolerance", v.tolerance}});
    j["verdicts"] = verdicts;
    j["passed"] = rep.passed();
    return j.dump(2) + "\n";
}

std::string ledger_csv(const EntropyLedger& ledger) {
    std::string out = "time,E_total,E_inner,l2_shifted,xL,xR,xbar\n";
    for (const auto& r : ledger.rows) {
        out += format_double(r.time) + "," + format_double(r.E_total) + "," +
               format_double(r.E_inner) + "," + format_double(r.l2_shifted) + "," +
               format_double(r.xL) + "," + format_double(r.xR) + "," + format_double(r.xbar) +
               "\n";
    }
    return out;
}

std::string profile_csv(const solver::PiecewiseConstantProfile& profile) {
    std::string out = format_double(profile.time) + "," + format_double(profile.leftmost_state) + "\n";
    for (const auto& f : profile.fronts) {
        out += format_double(f.position) + "," + format_double(f.left_state) + "," +
               format_double(f.right_state) + "," + format_double(f.speed) + "," +
               (f.kind == solver::FrontKind::shock ? "shock" : "rarefaction-step") + "\n";
    }
    return out;
}

std::string curve_csv(const tracking::ShiftCurve& curve) {
    std::string out;
    for (const auto& bp : curve.breakpoints) {
        out += format_double(bp.time) + "," + format_double(bp.position) + "," +
               format_double(bp.speed) + ",";
        if (bp.mode == tracking::CurveMode::riding_shock)
            out += "riding-shock(" + std::to_string(bp.front_id) + ")";
        else
            out += "free";
        out += "\n";
    }
    return out;
}

}  // namespace shockstab::monitor
