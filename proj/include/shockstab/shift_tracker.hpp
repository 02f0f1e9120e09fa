#ifndef SHOCKSTAB_SHIFT_TRACKER_HPP
#define SHOCKSTAB_SHIFT_TRACKER_HPP

#include <cstdint>
#include <vector>

#include "shockstab/convex_calculus.hpp"
#include "shockstab/scalar_solver.hpp"

namespace shockstab::tracking {

enum class CurveMode { free, riding_shock };

struct CurveBreakpoint {
    double time = 0.0;
    double position = 0.0;
    double speed = 0.0;  // of the segment starting here
    CurveMode mode = CurveMode::free;
    std::int64_t front_id = -1;  // valid in riding_shock mode
};

/// A Filippov solution stored as piecewise-linear breakpoints.
struct ShiftCurve {
    double anchor_state = 0.0;  // the constant C the curve is measured against
    std::vector<CurveBreakpoint> breakpoints;
    bool non_unique_start = false;  // several admissible continuations at t0

    double start_time() const { return breakpoints.front().time; }
    double end_time() const { return breakpoints.back().time; }
    double position(double t) const;
    double speed_at(double t) const;  // right-continuous
    double max_abs_speed() const;
};

enum class SpeedKind { free_flow, ride, detach_left, detach_right };

/// The Filippov dichotomy at a point: free transport speed f(U, C) at
/// continuity points, the Rankine-Hugoniot speed when the trapping interval
/// [f(U(x+),C), f(U(x-),C)] contains it, the escape-side free speed otherwise.
struct SpeedDecision {
    SpeedKind kind = SpeedKind::free_flow;
    double speed = 0.0;
};

SpeedDecision filippov_speed(const calculus::FluxEntropyPair& pair,
                             const solver::PiecewiseConstantProfile& profile, double x, double C);

/// Tie-break branch at genuinely ambiguous starts (e.g. a rarefaction
/// center at t = 0); `standard` is the deterministic default.
enum class Branch { standard, force_left, force_right };

struct IntegrateOptions {
    Branch branch = Branch::standard;
    double time_tie = 1e-12;
};

/// Integrates one Filippov curve through the recorded evolution, breakpoint
/// by breakpoint; the speed is constant between solver events and
/// curve-front crossings.
ShiftCurve integrate_shift(const solver::EvolutionLog& log,
                           const calculus::FluxEntropyPair& pair, double C, double x0, double t0,
                           double T, IntegrateOptions options = IntegrateOptions{});

enum class XbarPolicy { left, right, midpoint };

struct ShiftPair {
    ShiftCurve left;   // anchored at C_L
    ShiftCurve right;  // anchored at C_R
    ShiftCurve xbar;   // policy shift, already net of sigma*t
    XbarPolicy policy = XbarPolicy::left;
    double sigma = 0.0;
    double max_crossing = 0.0;  // max over breakpoint times of x_R - x_L
};

ShiftPair track_shift_pair(const solver::EvolutionLog& log, const calculus::FluxEntropyPair& pair,
                           double c_left, double c_right, double sigma,
                           XbarPolicy policy = XbarPolicy::left);
/// Convenience overload: evolves the scenario to its horizon first.
ShiftPair track_shift_pair(const solver::Scenario& scenario,
                           XbarPolicy policy = XbarPolicy::left);

struct UniquenessProbe {
    double spread = 0.0;            // max pairwise terminal deviation
    bool non_unique_start = false;  // funnel detected at (t0, x0)
    std::vector<double> terminals;
};

/// Re-integrates the same curve with perturbed event tolerances and forced
/// tie-break branches. For t0 > 0 the spread is expected at roundoff level;
/// a start on a rarefaction center at t0 = 0 is flagged instead of resolved.
UniquenessProbe uniqueness_probe(const solver::Scenario& scenario, double t0, double x0, double C,
                                 int n_restarts);

}  // namespace shockstab::tracking

#endif
