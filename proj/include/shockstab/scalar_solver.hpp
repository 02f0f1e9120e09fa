#ifndef SHOCKSTAB_SCALAR_SOLVER_HPP
#define SHOCKSTAB_SCALAR_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shockstab/convex_calculus.hpp"

namespace shockstab::solver {

enum class FrontKind { shock, rarefaction_step };
enum class Side { left, right };

/// A single traveling discontinuity of the piecewise-constant solution.
struct Front {
    double position = 0.0;
    double left_state = 0.0;
    double right_state = 0.0;
    double speed = 0.0;
    FrontKind kind = FrontKind::shock;
};

/// The solution U(., t): ordered fronts between constant states. Positions
/// are non-decreasing; they coincide only inside a same-birth fan cluster,
/// which spreads immediately for t beyond the birth time.
struct PiecewiseConstantProfile {
    double time = 0.0;
    double leftmost_state = 0.0;
    std::vector<Front> fronts;

    double rightmost_state() const {
        return fronts.empty() ? leftmost_state : fronts.back().right_state;
    }
    double min_state() const;
    double max_state() const;
    double total_variation() const;
};

struct PerturbationInterval {
    double left = 0.0;
    double right = 0.0;
    double delta = 0.0;
};

/// A shock background phi (C_L for x<0, C_R for x>0, C_L > C_R) plus a
/// compactly supported piecewise-constant perturbation.
struct Scenario {
    std::string id = "scenario";
    calculus::FluxEntropyPair pair;
    double c_left = 1.0;
    double c_right = 0.0;
    std::vector<PerturbationInterval> perturbation;
    double horizon = 1.0;
    double delta_rare = 1e-3;
    std::uint64_t seed = 0;

    double sigma() const;        // Rankine-Hugoniot speed of the background shock
    double sup_initial() const;  // sup |U0|
    double min_initial() const;
    double max_initial() const;
    double initial_l2() const;   // ||U0 - phi||_L2, exact
    void validate() const;       // throws input errors
};

double rankine_hugoniot_speed(const calculus::FluxEntropyPair& pair, double uL, double uR);

/// Waves of the Riemann problem (uL, uR) at a common origin: a single shock
/// for uL > uR, nothing for equal states, a fan of admissible small steps of
/// size <= delta_rare for uL < uR, each moving at the RH speed of its jump.
std::vector<Front> solve_riemann(const calculus::FluxEntropyPair& pair, double uL, double uR,
                                 double delta_rare);

PiecewiseConstantProfile discretize_initial(const Scenario& scenario);

/// Exact one-sided trace U(x-, t) or U(x+, t).
double trace(const PiecewiseConstantProfile& profile, double x, Side side);

/// Solver-internal view of a front: immutable kinematics plus identity.
struct FrontRecord {
    std::int64_t id = -1;
    double x0 = 0.0;  // position at time t0
    double t0 = 0.0;
    double speed = 0.0;
    double left_state = 0.0;
    double right_state = 0.0;
    FrontKind kind = FrontKind::shock;

    double position_at(double t) const { return x0 + speed * (t - t0); }
};

/// One collision: a contiguous cluster of fronts meeting at one point is
/// replaced by the waves of the local Riemann problem.
struct SolverEvent {
    double time = 0.0;
    double position = 0.0;
    std::vector<std::int64_t> removed;
    std::vector<FrontRecord> inserted;
};

/// Complete record of an evolution: the initial fronts and every collision,
/// enough to reconstruct the exact profile at any intermediate time.
struct EvolutionLog {
    double t_begin = 0.0;
    double t_end = 0.0;
    double leftmost_state = 0.0;
    std::vector<FrontRecord> initial;
    std::vector<SolverEvent> events;
    std::int64_t record_count = 0;  // ids are dense in [0, record_count)

    std::vector<double> event_times() const;
};

struct Evolution {
    EvolutionLog log;
    PiecewiseConstantProfile profile;  // at t_end
};

/// Event-driven front tracking from `profile` up to t_target.
Evolution evolve_logged(const PiecewiseConstantProfile& profile,
                        const calculus::FluxEntropyPair& pair, double t_target,
                        double delta_rare);
PiecewiseConstantProfile evolve(const PiecewiseConstantProfile& profile,
                                const calculus::FluxEntropyPair& pair, double t_target,
                                double delta_rare);

/// Forward cursor over an EvolutionLog: applies events in order and exposes
/// the alive fronts without materializing profiles.
class LogReplayer {
  public:
    /// Holds a reference to the log; the log must outlive the replayer.
    explicit LogReplayer(const EvolutionLog& log);
    explicit LogReplayer(EvolutionLog&&) = delete;

    /// Applies all events with time <= t (post-event view at event times).
    void advance_to(double t);
    double time() const { return time_; }
    double leftmost_state() const { return log_->leftmost_state; }

    const FrontRecord& record(std::int64_t id) const { return records_[id]; }
    bool alive(std::int64_t id) const { return alive_[id]; }
    std::int64_t first() const { return head_; }
    std::int64_t next(std::int64_t id) const { return next_[id]; }
    std::int64_t prev(std::int64_t id) const { return prev_[id]; }
    std::int64_t total_records() const { return static_cast<std::int64_t>(records_.size()); }

    /// Next pending event time, or +infinity when exhausted.
    double next_event_time() const;

    PiecewiseConstantProfile profile_at(double t);
    double trace_at(double t, double x, Side side) const;

    /// Leftmost alive front whose position at the replayer's current time is
    /// >= x - tol; -1 when none.
    std::int64_t find_at_or_right_of(double x) const;

  private:
    const EvolutionLog* log_;
    std::vector<FrontRecord> records_;
    std::vector<char> alive_;
    std::vector<std::int64_t> next_, prev_;
    std::int64_t head_ = -1;
    std::size_t next_event_ = 0;
    double time_ = 0.0;
};

/// First-order finite-volume oracle on a uniform grid.
struct GridProfile {
    double x_left = 0.0;
    double dx = 0.0;
    double time = 0.0;
    std::vector<double> values;

    int cells() const { return static_cast<int>(values.size()); }
    double x_right() const { return x_left + dx * cells(); }
    double cell_center(int i) const { return x_left + (i + 0.5) * dx; }
};

/// Godunov evolution of the scenario's initial data to scenario.horizon on a
/// domain padded so boundary influence cannot reach the waves.
GridProfile godunov_reference(const Scenario& scenario, int cells, double cfl);

enum class Metric { L1, L2 };
struct Window {
    double a = 0.0;
    double b = 0.0;
};

/// Exact piecewise distance between two piecewise-constant profiles.
double compare_profiles(const PiecewiseConstantProfile& a, const PiecewiseConstantProfile& b,
                        Metric metric, Window window);
/// Trapezoid-sampled distance between a profile and a grid field.
double compare_profiles(const PiecewiseConstantProfile& a, const GridProfile& b, Metric metric,
                        Window window);

/// Discrete Oleinik decay quotient: largest net increase per unit distance
/// between distinct fronts (less a slack of two maximal up-jumps), scaled by
/// inf A'' and the profile time. At most ~1 for admissible front tracking.
double oleinik_ratio(const PiecewiseConstantProfile& profile,
                     const calculus::FluxEntropyPair& pair);

}  // namespace shockstab::solver

#endif
