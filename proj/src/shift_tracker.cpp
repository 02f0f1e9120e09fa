#include "shockstab/shift_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockstab/error.hpp"

namespace shockstab::tracking {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double position_tie(double x) { return 1e-12 * (1.0 + std::abs(x)); }

}  // namespace

double ShiftCurve::position(double t) const {
    const auto& bp = breakpoints;
    auto it = std::upper_bound(bp.begin(), bp.end(), t,
                               [](double v, const CurveBreakpoint& b) { return v < b.time; });
    if (it == bp.begin()) return bp.front().position;
    const CurveBreakpoint& seg = *(it - 1);
    return seg.position + seg.speed * (t - seg.time);
}

double ShiftCurve::speed_at(double t) const {
    const auto& bp = breakpoints;
    auto it = std::upper_bound(bp.begin(), bp.end(), t,
                               [](double v, const CurveBreakpoint& b) { return v < b.time; });
    if (it == bp.begin()) return bp.front().speed;
    return (it - 1)->speed;
}

double ShiftCurve::max_abs_speed() const {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        m = std::max(m, std::abs(breakpoints[i].speed));
    return m;
}

SpeedDecision filippov_speed(const calculus::FluxEntropyPair& pair,
                             const solver::PiecewiseConstantProfile& profile, double x, double C) {
    const double u_minus = solver::trace(profile, x, solver::Side::left);
    const double u_plus = solver::trace(profile, x, solver::Side::right);
    SpeedDecision d;
    if (u_minus == u_plus) {
        d.kind = SpeedKind::free_flow;
        d.speed = calculus::normalized_flux(pair, u_minus, C);
        return d;
    }
    const double s = solver::rankine_hugoniot_speed(pair, u_minus, u_plus);
    const double f_minus = calculus::normalized_flux(pair, u_minus, C);
    const double f_plus = calculus::normalized_flux(pair, u_plus, C);
    if (u_minus > u_plus && f_plus <= s && s <= f_minus) {
        d.kind = SpeedKind::ride;
        d.speed = s;
        return d;
    }
    if (std::max(f_minus, f_plus) < s) {
        d.kind = SpeedKind::detach_left;  // the front outruns the curve
        d.speed = f_minus;
    } else {
        d.kind = SpeedKind::detach_right;
        d.speed = f_plus;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Curve integration
// ---------------------------------------------------------------------------

namespace {

using solver::FrontRecord;
using solver::LogReplayer;

struct Integrator {
    const solver::EvolutionLog& log;
    const calculus::FluxEntropyPair& pair;
    double C;
    IntegrateOptions opt;
    LogReplayer replayer;

    double t, x;
    double speed = 0.0;
    CurveMode mode = CurveMode::free;
    std::int64_t riding = -1;   // alive front id in riding mode
    std::int64_t left_nb = -1;  // alive neighbors in free mode
    std::int64_t right_nb = -1;

    ShiftCurve curve;
    std::size_t applied_events = 0;  // replayer event cursor mirror

    Integrator(const solver::EvolutionLog& log_, const calculus::FluxEntropyPair& pair_,
               double C_, double x0, double t0, IntegrateOptions opt_)
        : log(log_), pair(pair_), C(C_), opt(opt_), replayer(log_), t(t0), x(x0) {
        curve.anchor_state = C;
        replayer.advance_to(t0);
        applied_events = count_applied(t0);
    }

    std::size_t count_applied(double upto) const {
        std::size_t n = 0;
        while (n < log.events.size() && log.events[n].time <= upto) ++n;
        return n;
    }

    double free_speed(double u) const { return calculus::normalized_flux(pair, u, C); }

    void push_breakpoint() {
        if (!curve.breakpoints.empty()) {
            auto& last = curve.breakpoints.back();
            if (last.time == t && last.mode == mode && last.speed == speed) return;
            if (last.time == t) {
                last.position = x;
                last.speed = speed;
                last.mode = mode;
                last.front_id = riding;
                return;
            }
        }
        curve.breakpoints.push_back({t, x, speed, mode, riding});
    }

    // --- placement at a (possibly empty) group of coincident fronts ---------

    struct Candidate {
        bool ride = false;
        std::int64_t front = -1;  // ride target, or cell's right boundary (-1 = none)
        std::int64_t left = -1;   // cell's left boundary
        double speed = 0.0;
    };

    void adopt(const Candidate& c) {
        if (c.ride) {
            mode = CurveMode::riding_shock;
            riding = c.front;
            left_nb = right_nb = -1;
            speed = c.speed;
        } else {
            mode = CurveMode::free;
            riding = -1;
            left_nb = c.left;
            right_nb = c.front;
            speed = c.speed;
        }
        push_breakpoint();
    }

    // Fronts whose current position coincides with x.
    std::vector<std::int64_t> group_at(double pos) const {
        std::vector<std::int64_t> g;
        const double tol = position_tie(pos);
        std::int64_t id = replayer.find_at_or_right_of(pos);
        while (id >= 0 && std::abs(replayer.record(id).position_at(t) - pos) <= tol) {
            g.push_back(id);
            id = replayer.next(id);
        }
        return g;
    }

    // Same, but expanded locally around a known alive member.
    std::vector<std::int64_t> group_around(std::int64_t id) const {
        const double pos = replayer.record(id).position_at(t);
        const double tol = position_tie(pos);
        std::int64_t first = id;
        while (replayer.prev(first) >= 0 &&
               std::abs(replayer.record(replayer.prev(first)).position_at(t) - pos) <= tol)
            first = replayer.prev(first);
        std::vector<std::int64_t> g;
        for (std::int64_t k = first;
             k >= 0 && std::abs(replayer.record(k).position_at(t) - pos) <= tol;
             k = replayer.next(k))
            g.push_back(k);
        return g;
    }

    // Chooses a continuation at a coincident group: micro-cells between the
    // fronts plus trapped rides. Several consistent choices mean a Filippov
    // funnel; the branch option picks deterministically and the fact is
    // recorded.
    void place_at_group(const std::vector<std::int64_t>& group, bool at_start) {
        if (group.empty()) {
            locate_free_neighbors();
            speed = free_speed(cell_state());
            push_breakpoint();
            return;
        }
        const std::size_t m = group.size();
        std::vector<double> states(m + 1), fval(m + 1), s(m);
        for (std::size_t k = 0; k < m; ++k) {
            const auto& r = replayer.record(group[k]);
            states[k] = r.left_state;
            states[k + 1] = r.right_state;
            s[k] = r.speed;
        }
        for (std::size_t k = 0; k <= m; ++k) fval[k] = free_speed(states[k]);

        std::vector<Candidate> consistent;
        for (std::size_t k = 0; k <= m; ++k) {
            // cell k: left of front k, right of front k-1
            const bool left_ok = (k == 0) || fval[k] >= s[k - 1];
            const bool right_ok = (k == m) || fval[k] <= s[k];
            if (left_ok && right_ok) {
                Candidate c;
                c.left = (k == 0) ? replayer.prev(group[0]) : group[k - 1];
                c.front = (k == m) ? replayer.next(group[m - 1]) : group[k];
                c.speed = fval[k];
                consistent.push_back(c);
            }
            if (k < m && states[k] > states[k + 1] && fval[k + 1] <= s[k] && s[k] <= fval[k]) {
                Candidate c;
                c.ride = true;
                c.front = group[k];
                c.speed = s[k];
                consistent.push_back(c);
            }
        }
        if (consistent.empty())
            throw internal_error("shift integration found no admissible continuation");
        if (at_start && consistent.size() > 1) curve.non_unique_start = true;

        const Candidate* pick = nullptr;
        switch (opt.branch) {
            case Branch::force_left:
                pick = &consistent.front();
                break;
            case Branch::force_right:
                pick = &consistent.back();
                break;
            case Branch::standard:
                for (const auto& c : consistent)
                    if (c.ride) {
                        pick = &c;
                        break;
                    }
                if (!pick) pick = &consistent.back();
                break;
        }
        adopt(*pick);
    }

    double cell_state() const {
        return left_nb >= 0 ? replayer.record(left_nb).right_state : replayer.leftmost_state();
    }

    void locate_free_neighbors() {
        mode = CurveMode::free;
        riding = -1;
        right_nb = replayer.find_at_or_right_of(x);
        left_nb = right_nb >= 0 ? replayer.prev(right_nb) : last_front();
    }

    std::int64_t last_front() const {
        std::int64_t id = replayer.first();
        if (id < 0) return -1;
        while (replayer.next(id) >= 0) id = replayer.next(id);
        return id;
    }

    // --- crossing of a single front from a known side ------------------------

    void land_on_front(std::int64_t id, bool from_left) {
        const auto& r = replayer.record(id);
        const double fL = free_speed(r.left_state);
        const double fR = free_speed(r.right_state);
        if (r.left_state > r.right_state && fR <= r.speed && r.speed <= fL) {
            mode = CurveMode::riding_shock;
            riding = id;
            left_nb = right_nb = -1;
            speed = r.speed;
        } else if (from_left) {
            // pass through to the right cell
            mode = CurveMode::free;
            riding = -1;
            left_nb = id;
            right_nb = replayer.next(id);
            speed = fR;
        } else {
            mode = CurveMode::free;
            riding = -1;
            right_nb = id;
            left_nb = replayer.prev(id);
            speed = fL;
        }
        push_breakpoint();
    }

    // --- event bookkeeping ---------------------------------------------------

    // Applies all events at the next event time and repairs the curve state.
    void cross_event_time(double te) {
        advance_position(te);
        replayer.advance_to(te);
        const std::size_t first_applied = applied_events;
        applied_events = count_applied(te);

        if (mode == CurveMode::riding_shock) {
            if (replayer.alive(riding)) return;  // untouched: keep riding
            // Our front merged; we sit exactly at the collision point.
            const SolverEventRef ev = event_removing(riding, first_applied);
            x = ev->position;
            if (!ev->inserted.empty()) place_at_group(group_around(ev->inserted.front().id), false);
            else place_at_group(group_at(x), false);
            return;
        }

        // Free mode: repair neighbor links if the events touched them.
        const bool left_gone = left_nb >= 0 && !replayer.alive(left_nb);
        const bool right_gone = right_nb >= 0 && !replayer.alive(right_nb);
        if (!left_gone && !right_gone) return;  // state unchanged
        if (left_gone && right_gone) {
            const SolverEventRef evl = event_removing(left_nb, first_applied);
            const SolverEventRef evr = event_removing(right_nb, first_applied);
            if (evl == evr) {
                // Squeezed between our own colliding neighbors.
                x = evl->position;
                if (!evl->inserted.empty())
                    place_at_group(group_around(evl->inserted.front().id), false);
                else place_at_group(group_at(x), false);
                return;
            }
            locate_free_neighbors();
        } else if (left_gone) {
            left_nb = right_nb >= 0 ? replayer.prev(right_nb) : last_front();
        } else {
            right_nb = left_nb >= 0 ? replayer.next(left_nb) : replayer.first();
        }
        // A rebuilt neighbor may sit exactly at our position.
        for (std::int64_t nb : {left_nb, right_nb})
            if (nb >= 0 &&
                std::abs(replayer.record(nb).position_at(t) - x) <= position_tie(x)) {
                place_at_group(group_around(nb), false);
                return;
            }
    }

    using SolverEventRef = const solver::SolverEvent*;

    SolverEventRef event_removing(std::int64_t id, std::size_t first_applied) const {
        for (std::size_t e = first_applied; e < applied_events; ++e) {
            const auto& ev = log.events[e];
            if (std::find(ev.removed.begin(), ev.removed.end(), id) != ev.removed.end())
                return &ev;
        }
        throw internal_error("shift integration lost track of a removed front");
    }

    void advance_position(double to) {
        if (mode == CurveMode::riding_shock) x = replayer.record(riding).position_at(to);
        else x += speed * (to - t);
        t = to;
    }

    // Earliest time the free curve meets a neighbor, or +infinity.
    double next_crossing(std::int64_t* hit) const {
        double best = kInfinity;
        *hit = -1;
        if (left_nb >= 0) {
            const auto& r = replayer.record(left_nb);
            const double rel = r.speed - speed;
            if (rel > 1e-14) {
                const double gap = x - r.position_at(t);
                const double tc = t + std::max(gap, 0.0) / rel;
                if (tc < best) {
                    best = tc;
                    *hit = left_nb;
                }
            }
        }
        if (right_nb >= 0) {
            const auto& r = replayer.record(right_nb);
            const double rel = speed - r.speed;
            if (rel > 1e-14) {
                const double gap = r.position_at(t) - x;
                const double tc = t + std::max(gap, 0.0) / rel;
                if (tc < best) {
                    best = tc;
                    *hit = right_nb;
                }
            }
        }
        return best;
    }

    ShiftCurve run(double T) {
        place_at_group(group_at(x), true);

        std::size_t steps = 0;
        while (t < T) {
            if (++steps > 1000000) throw internal_error("shift integration step starvation");
            const double te = std::min(replayer.next_event_time(), kInfinity);
            if (mode == CurveMode::riding_shock) {
                speed = replayer.record(riding).speed;
                if (te > T) {
                    advance_position(T);
                    break;
                }
                cross_event_time(te);
                continue;
            }
            std::int64_t hit = -1;
            const double tc = next_crossing(&hit);
            if (tc <= std::min(te - opt.time_tie, T)) {
                advance_position(tc);
                x = replayer.record(hit).position_at(tc);  // exact landing
                land_on_front(hit, hit == right_nb);
                continue;
            }
            if (te > T) {
                advance_position(T);
                break;
            }
            cross_event_time(te);
        }
        t = T;
        curve.breakpoints.push_back({T, x, speed, mode, riding});
        return std::move(curve);
    }
};

}  // namespace

ShiftCurve integrate_shift(const solver::EvolutionLog& log,
                           const calculus::FluxEntropyPair& pair, double C, double x0, double t0,
                           double T, IntegrateOptions options) {
    if (!(t0 >= log.t_begin - 1e-12) || !(T <= log.t_end + 1e-12) || !(t0 <= T))
        throw input_error("integrate_shift: [t0, T] must lie inside the recorded evolution");
    Integrator integ(log, pair, C, x0, t0, options);
    if (t0 == T) {
        ShiftCurve c;
        c.anchor_state = C;
        c.breakpoints.push_back({t0, x0, 0.0, CurveMode::free, -1});
        return c;
    }
    return integ.run(T);
}

ShiftPair track_shift_pair(const solver::EvolutionLog& log, const calculus::FluxEntropyPair& pair,
                           double c_left, double c_right, double sigma, XbarPolicy policy) {
    ShiftPair out;
    out.policy = policy;
    out.sigma = sigma;
    out.left = integrate_shift(log, pair, c_left, 0.0, log.t_begin, log.t_end);
    out.right = integrate_shift(log, pair, c_right, 0.0, log.t_begin, log.t_end);

    std::vector<double> times;
    for (const auto& b : out.left.breakpoints) times.push_back(b.time);
    for (const auto& b : out.right.breakpoints) times.push_back(b.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    out.max_crossing = -kInfinity;
    for (double t : times)
        out.max_crossing = std::max(out.max_crossing, out.right.position(t) - out.left.position(t));

    out.xbar.anchor_state = 0.0;
    for (double t : times) {
        const double xl = out.left.position(t);
        const double xr = out.right.position(t);
        double pos = 0.0, spd = 0.0;
        switch (policy) {
            case XbarPolicy::left:
                pos = xl;
                spd = out.left.speed_at(t);
                break;
            case XbarPolicy::right:
                pos = xr;
                spd = out.right.speed_at(t);
                break;
            case XbarPolicy::midpoint:
                pos = 0.5 * (xl + xr);
                spd = 0.5 * (out.left.speed_at(t) + out.right.speed_at(t));
                break;
        }
        out.xbar.breakpoints.push_back({t, pos - sigma * t, spd - sigma, CurveMode::free, -1});
    }
    return out;
}

ShiftPair track_shift_pair(const solver::Scenario& scenario, XbarPolicy policy) {
    scenario.validate();
    const auto profile = solver::discretize_initial(scenario);
    const auto evolution =
        solver::evolve_logged(profile, scenario.pair, scenario.horizon, scenario.delta_rare);
    return track_shift_pair(evolution.log, scenario.pair, scenario.c_left, scenario.c_right,
                            scenario.sigma(), policy);
}

UniquenessProbe uniqueness_probe(const solver::Scenario& scenario, double t0, double x0, double C,
                                 int n_restarts) {
    scenario.validate();
    if (!(t0 >= 0.0) || !(t0 <= scenario.horizon))
        throw input_error("uniqueness_probe: t0 must lie in [0, horizon]");
    const auto profile = solver::discretize_initial(scenario);
    const auto evolution =
        solver::evolve_logged(profile, scenario.pair, scenario.horizon, scenario.delta_rare);

    UniquenessProbe probe;
    auto run = [&](IntegrateOptions opt) {
        ShiftCurve c =
            integrate_shift(evolution.log, scenario.pair, C, x0, t0, scenario.horizon, opt);
        probe.non_unique_start = probe.non_unique_start || c.non_unique_start;
        probe.terminals.push_back(c.breakpoints.back().position);
    };
    run(IntegrateOptions{Branch::standard, 1e-12});
    run(IntegrateOptions{Branch::force_left, 1e-12});
    run(IntegrateOptions{Branch::force_right, 1e-12});
    for (int k = 0; k < n_restarts; ++k)
        run(IntegrateOptions{Branch::standard, 1e-12 * (1.0 + 0.37 * (k + 1))});

    const auto [lo, hi] = std::minmax_element(probe.terminals.begin(), probe.terminals.end());
    probe.spread = *hi - *lo;
    if (probe.spread > 1e-9 * (1.0 + std::abs(*hi))) probe.non_unique_start = true;
    return probe;
}

}  // namespace shockstab::tracking
