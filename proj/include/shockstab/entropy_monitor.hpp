#ifndef SHOCKSTAB_ENTROPY_MONITOR_HPP
#define SHOCKSTAB_ENTROPY_MONITOR_HPP

#include <string>
#include <vector>

#include "shockstab/convex_calculus.hpp"
#include "shockstab/scalar_solver.hpp"
#include "shockstab/shift_tracker.hpp"

namespace shockstab::monitor {

struct LedgerRow {
    double time = 0.0;
    double E_total = 0.0;     // relative entropy outside [x_L, x_R]
    double E_inner = 0.0;     // relative entropy on [x_L, x_R] against the mid anchor
    double eta_shifted = 0.0; // relative entropy against the shifted shock
    double l2_shifted = 0.0;  // L2 distance to the shifted shock
    double xL = 0.0;
    double xR = 0.0;
    double xbar = 0.0;
    double s_measure = 0.0;   // |S| accumulated since the previous row
};

struct EntropyLedger {
    std::vector<LedgerRow> rows;
};

struct Verdict {
    std::string name;
    bool pass = false;
    bool vacuous = false;      // hypothesis never triggered
    double worst_margin = 0.0; // quantity minus bound, max over times (<= tolerance passes)
    double worst_time = 0.0;
    double tolerance = 0.0;
};

/// Everything certified for one scenario run.
struct StabilityReport {
    std::string scenario_id;
    std::string pair_name;
    double c_left = 0.0, c_right = 0.0;
    double horizon = 0.0;
    double delta_rare = 0.0;
    double sigma = 0.0;

    double initial_l2 = 0.0;      // ||U0 - phi||_L2
    double initial_entropy = 0.0; // E(0)
    double tol_entropy = 0.0;     // discretization slack, linear in delta_rare

    calculus::BoundsBox box;           // on the padded state box
    double curve_lipschitz = 0.0;      // sup |f| over the box
    double lambda_dissipation = 0.0;
    double kappa = 0.0;
    double lambda_shift = 0.0;
    double anchor_mid = 0.0;

    tracking::XbarPolicy policy = tracking::XbarPolicy::left;
    double max_crossing = 0.0;
    double xbar_final_left = 0.0, xbar_final_right = 0.0, xbar_final_mid = 0.0;

    EntropyLedger ledger;
    std::vector<Verdict> verdicts;

    tracking::ShiftCurve curve_left, curve_right;
    std::vector<solver::PiecewiseConstantProfile> snapshots;  // t = 0, T/2, T

    bool passed() const;
};

/// E(t): relative entropy against C_L left of x_L plus against C_R right of
/// x_R; exact piecewise integration. The far field must sit at C_L / C_R.
double total_relative_entropy(const solver::PiecewiseConstantProfile& profile, double x_L,
                              double x_R, const calculus::FluxEntropyPair& pair, double c_left,
                              double c_right);

/// Relative entropy against C over [x_L, x_R]; zero when x_L >= x_R.
double inner_relative_entropy(const solver::PiecewiseConstantProfile& profile, double x_L,
                              double x_R, const calculus::FluxEntropyPair& pair, double C);

/// lambda = eps_fC * K * (eps_eta/2) * (eps_fC/(2 L_fU) * (C_L - C_R))^2
/// with K = min(C_L - C, C - C_R); the dissipation-rate constant.
double dissipation_constant(const calculus::FluxEntropyPair& pair,
                            const calculus::BoundsBox& box, double c_left, double c_right,
                            double C);

/// lambda = 1/(C_L-C_R) [ sqrt(2 L_eta/eps_eta (L+|sigma|)) + sqrt(2 (M+L+|sigma|)) ]
/// with M = sup|A'| on the box and L the curve Lipschitz bound.
double shift_bound_lambda(const solver::Scenario& scenario, const calculus::BoundsBox& box,
                          double curve_lipschitz);

/// Discretization slack: 10 * delta_rare * (1 + T) * L_eta * sup|U0|^2.
double entropy_tolerance(const solver::Scenario& scenario, const calculus::BoundsBox& box);

/// Runs solver and shift pair, samples the ledger at every solver/curve
/// event plus 200 uniform times, and evaluates all certified inequalities.
StabilityReport stability_report(const solver::Scenario& scenario,
                                 tracking::XbarPolicy policy = tracking::XbarPolicy::left);

std::string report_json(const StabilityReport& report);
std::string ledger_csv(const EntropyLedger& ledger);
std::string profile_csv(const solver::PiecewiseConstantProfile& profile);
std::string curve_csv(const tracking::ShiftCurve& curve);

}  // namespace shockstab::monitor

#endif
