#include "shockstab/scalar_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "shockstab/error.hpp"

namespace shockstab::solver {

namespace {

constexpr double kZeroStrength = 1e-14;   // fronts below this jump are pruned
constexpr double kTimeTie = 1e-12;        // simultaneous-collision tolerance
constexpr double kInfinity = std::numeric_limits<double>::infinity();

double position_tie(double x) { return 1e-12 * (1.0 + std::abs(x)); }

// Piecewise-constant initial data as sorted breakpoints with the constant
// value to the left of each breakpoint; value right of the last breakpoint
// appended separately.
struct StepFunction {
    std::vector<double> breaks;
    std::vector<double> values;  // values[i] on (breaks[i-1], breaks[i]); values[n] on the right

    double at(double x) const {
        std::size_t i = std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin();
        return values[i];
    }
};

StepFunction initial_step_function(const Scenario& s) {
    std::vector<double> xs{0.0};
    for (const auto& p : s.perturbation) {
        xs.push_back(p.left);
        xs.push_back(p.right);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    StepFunction f;
    f.breaks = xs;
    for (std::size_t i = 0; i <= xs.size(); ++i) {
        const double probe = (i == 0)           ? xs.front() - 1.0
                             : (i == xs.size()) ? xs.back() + 1.0
                                                : 0.5 * (xs[i - 1] + xs[i]);
        double u = probe < 0.0 ? s.c_left : s.c_right;
        for (const auto& p : s.perturbation)
            if (probe >= p.left && probe < p.right) u += p.delta;
        f.values.push_back(u);
    }
    return f;
}

}  // namespace

double PiecewiseConstantProfile::min_state() const {
    double m = leftmost_state;
    for (const auto& f : fronts) m = std::min({m, f.left_state, f.right_state});
    return m;
}

double PiecewiseConstantProfile::max_state() const {
    double m = leftmost_state;
    for (const auto& f : fronts) m = std::max({m, f.left_state, f.right_state});
    return m;
}

double PiecewiseConstantProfile::total_variation() const {
    double tv = 0.0;
    for (const auto& f : fronts) tv += std::abs(f.right_state - f.left_state);
    return tv;
}

double Scenario::sigma() const {
    return rankine_hugoniot_speed(pair, c_left, c_right);
}

double Scenario::min_initial() const {
    const StepFunction f = initial_step_function(*this);
    return *std::min_element(f.values.begin(), f.values.end());
}

double Scenario::max_initial() const {
    const StepFunction f = initial_step_function(*this);
    return *std::max_element(f.values.begin(), f.values.end());
}

double Scenario::sup_initial() const {
    return std::max(std::abs(min_initial()), std::abs(max_initial()));
}

double Scenario::initial_l2() const {
    double sum = 0.0;
    for (const auto& p : perturbation) sum += p.delta * p.delta * (p.right - p.left);
    return std::sqrt(sum);
}

void Scenario::validate() const {
    if (!(c_left > c_right)) throw input_error("scenario requires C_L > C_R");
    if (!(delta_rare > 0.0)) throw input_error("delta_rare must be positive");
    if (!(horizon >= 0.0)) throw input_error("horizon must be nonnegative");
    for (std::size_t i = 0; i < perturbation.size(); ++i) {
        const auto& p = perturbation[i];
        if (!(p.left < p.right))
            throw input_error("perturbation interval " + std::to_string(i) + " is empty");
        if (!std::isfinite(p.delta)) throw input_error("perturbation height must be finite");
        if (i > 0 && !(perturbation[i - 1].right <= p.left))
            throw input_error("perturbation intervals must be disjoint and ordered");
    }
    const double lo = std::min(min_initial(), c_right) - 0.5;
    const double hi = std::max(max_initial(), c_left) + 0.5;
    calculus::validate_pair(pair, lo, hi);
}

double rankine_hugoniot_speed(const calculus::FluxEntropyPair& pair, double uL, double uR) {
    return (pair.flux(uL) - pair.flux(uR)) / (uL - uR);
}

std::vector<Front> solve_riemann(const calculus::FluxEntropyPair& pair, double uL, double uR,
                                 double delta_rare) {
    if (!(delta_rare > 0.0)) throw input_error("delta_rare must be positive");
    std::vector<Front> out;
    if (std::abs(uR - uL) < kZeroStrength) return out;
    if (uL > uR) {
        out.push_back({0.0, uL, uR, rankine_hugoniot_speed(pair, uL, uR), FrontKind::shock});
        return out;
    }
    const int n = std::max(1, static_cast<int>(std::ceil((uR - uL) / delta_rare - 1e-12)));
    double prev = uL;
    for (int k = 1; k <= n; ++k) {
        const double next = (k == n) ? uR : uL + (uR - uL) * k / n;
        out.push_back({0.0, prev, next, rankine_hugoniot_speed(pair, prev, next),
                       FrontKind::rarefaction_step});
        prev = next;
    }
    return out;
}

PiecewiseConstantProfile discretize_initial(const Scenario& scenario) {
    scenario.validate();
    const StepFunction f = initial_step_function(scenario);

    PiecewiseConstantProfile profile;
    profile.time = 0.0;
    profile.leftmost_state = f.values.front();
    for (std::size_t i = 0; i < f.breaks.size(); ++i) {
        const double uL = f.values[i];
        const double uR = f.values[i + 1];
        for (Front w : solve_riemann(scenario.pair, uL, uR, scenario.delta_rare)) {
            w.position = f.breaks[i];
            profile.fronts.push_back(w);
        }
    }
    return profile;
}

double trace(const PiecewiseConstantProfile& profile, double x, Side side) {
    const auto& fr = profile.fronts;
    const double tol = position_tie(x);
    // First front at or right of the group around x.
    std::size_t lo = std::lower_bound(fr.begin(), fr.end(), x - tol,
                                      [](const Front& f, double v) { return f.position < v; }) -
                     fr.begin();
    if (side == Side::left)
        return lo == 0 ? profile.leftmost_state : fr[lo - 1].right_state;
    std::size_t hi = lo;
    while (hi < fr.size() && fr[hi].position <= x + tol) ++hi;
    return hi == 0 ? profile.leftmost_state : fr[hi - 1].right_state;
}

std::vector<double> EvolutionLog::event_times() const {
    std::vector<double> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.time);
    return out;
}

// ---------------------------------------------------------------------------
// Event-driven evolution
// ---------------------------------------------------------------------------

namespace {

// Linked list of alive fronts over an append-only record store. Records are
// immutable once created, so a queued collision entry stays valid exactly as
// long as both fronts are alive and adjacent.
struct Tracker {
    std::vector<FrontRecord> records;
    std::vector<char> alive;
    std::vector<std::int64_t> next, prev;
    std::int64_t head = -1;

    std::int64_t add(const FrontRecord& r) {
        const std::int64_t id = static_cast<std::int64_t>(records.size());
        records.push_back(r);
        records.back().id = id;
        alive.push_back(1);
        next.push_back(-1);
        prev.push_back(-1);
        return id;
    }

    void link(std::int64_t a, std::int64_t b) {  // a before b; either may be -1
        if (a >= 0) next[a] = b;
        else head = b;
        if (b >= 0) prev[b] = a;
    }
};

struct Collision {
    double time;
    std::int64_t left_id;
    std::int64_t right_id;
    bool operator>(const Collision& other) const {
        if (time != other.time) return time > other.time;
        return left_id > other.left_id;  // deterministic tie order
    }
};

double collision_time(const FrontRecord& l, const FrontRecord& r) {
    const double dv = l.speed - r.speed;
    if (dv <= 1e-14) return kInfinity;
    const double t_ref = std::max(l.t0, r.t0);
    const double gap = r.position_at(t_ref) - l.position_at(t_ref);
    if (gap < -1e-9 * (1.0 + std::abs(r.position_at(t_ref))))
        throw internal_error("event queue inconsistency: fronts out of order");
    return t_ref + std::max(gap, 0.0) / dv;
}

}  // namespace

Evolution evolve_logged(const PiecewiseConstantProfile& profile,
                        const calculus::FluxEntropyPair& pair, double t_target,
                        double delta_rare) {
    if (!(t_target >= profile.time)) throw input_error("evolve: t_target precedes profile time");

    Tracker tr;
    std::priority_queue<Collision, std::vector<Collision>, std::greater<Collision>> queue;

    std::int64_t last = -1;
    for (const auto& f : profile.fronts) {
        FrontRecord rec;
        rec.x0 = f.position;
        rec.t0 = profile.time;
        rec.speed = f.speed;
        rec.left_state = f.left_state;
        rec.right_state = f.right_state;
        rec.kind = f.kind;
        const std::int64_t id = tr.add(rec);
        tr.link(last, id);
        last = id;
    }

    EvolutionLog log;
    log.t_begin = profile.time;
    log.t_end = t_target;
    log.leftmost_state = profile.leftmost_state;
    log.initial = tr.records;

    auto enqueue_pair = [&](std::int64_t a, std::int64_t b) {
        if (a < 0 || b < 0) return;
        const double t = collision_time(tr.records[a], tr.records[b]);
        if (t <= t_target) queue.push({t, a, b});
    };
    for (std::int64_t id = tr.head; id >= 0; id = tr.next[id]) enqueue_pair(id, tr.next[id]);

    auto valid = [&](const Collision& c) {
        return tr.alive[c.left_id] && tr.alive[c.right_id] && tr.next[c.left_id] == c.right_id;
    };

    while (!queue.empty()) {
        while (!queue.empty() && !valid(queue.top())) queue.pop();
        if (queue.empty()) break;
        const double t_now = queue.top().time;
        if (t_now > t_target) break;

        // All collisions within the tie window, left to right.
        std::vector<Collision> batch;
        while (!queue.empty() && queue.top().time <= t_now + kTimeTie) {
            if (valid(queue.top())) batch.push_back(queue.top());
            queue.pop();
        }
        std::sort(batch.begin(), batch.end(), [&](const Collision& a, const Collision& b) {
            return tr.records[a.left_id].position_at(t_now) <
                   tr.records[b.left_id].position_at(t_now);
        });

        for (const auto& c : batch) {
            if (!valid(c)) continue;  // absorbed by an earlier cluster in this batch

            // Grow the cluster: every front meeting at this point now.
            const double pos = tr.records[c.left_id].position_at(t_now);
            const double tol = position_tie(pos);
            std::int64_t first = c.left_id;
            while (tr.prev[first] >= 0 &&
                   std::abs(tr.records[tr.prev[first]].position_at(t_now) - pos) <= tol)
                first = tr.prev[first];
            std::int64_t last_id = c.right_id;
            while (tr.next[last_id] >= 0 &&
                   std::abs(tr.records[tr.next[last_id]].position_at(t_now) - pos) <= tol)
                last_id = tr.next[last_id];

            SolverEvent event;
            event.time = t_now;
            event.position = pos;

            const double uL = tr.records[first].left_state;
            const double uR = tr.records[last_id].right_state;
            const std::int64_t before = tr.prev[first];
            const std::int64_t after = tr.next[last_id];
            for (std::int64_t id = first;; id = tr.next[id]) {
                event.removed.push_back(id);
                tr.alive[id] = 0;
                if (id == last_id) break;
            }

            std::int64_t cursor = before;
            for (Front w : solve_riemann(pair, uL, uR, delta_rare)) {
                FrontRecord rec;
                rec.x0 = pos;
                rec.t0 = t_now;
                rec.speed = w.speed;
                rec.left_state = w.left_state;
                rec.right_state = w.right_state;
                rec.kind = w.kind;
                const std::int64_t id = tr.add(rec);
                event.inserted.push_back(tr.records[id]);
                tr.link(cursor, id);
                cursor = id;
            }
            tr.link(cursor, after);
            log.events.push_back(std::move(event));

            // New collision candidates at the cluster edges. Newborn siblings
            // have strictly increasing speeds and never collide.
            if (cursor != before) {
                if (before >= 0) enqueue_pair(before, tr.next[before]);
                if (after >= 0) enqueue_pair(tr.prev[after], after);
            } else {
                enqueue_pair(before, after);
            }
            if (log.events.size() > 2000000)
                throw internal_error("evolve: event budget exhausted");
        }
    }

    log.record_count = static_cast<std::int64_t>(tr.records.size());

    Evolution out;
    out.log = std::move(log);
    out.profile.time = t_target;
    out.profile.leftmost_state = profile.leftmost_state;
    for (std::int64_t id = tr.head; id >= 0; id = tr.next[id]) {
        const auto& r = tr.records[id];
        out.profile.fronts.push_back(
            {r.position_at(t_target), r.left_state, r.right_state, r.speed, r.kind});
    }
    return out;
}

PiecewiseConstantProfile evolve(const PiecewiseConstantProfile& profile,
                                const calculus::FluxEntropyPair& pair, double t_target,
                                double delta_rare) {
    return evolve_logged(profile, pair, t_target, delta_rare).profile;
}

// ---------------------------------------------------------------------------
// LogReplayer
// ---------------------------------------------------------------------------

LogReplayer::LogReplayer(const EvolutionLog& log) : log_(&log), time_(log.t_begin) {
    records_.resize(log.record_count);
    alive_.assign(log.record_count, 0);
    next_.assign(log.record_count, -1);
    prev_.assign(log.record_count, -1);
    for (const auto& r : log.initial) records_[r.id] = r;
    for (const auto& e : log.events)
        for (const auto& r : e.inserted) records_[r.id] = r;

    std::int64_t last = -1;
    for (const auto& r : log.initial) {
        alive_[r.id] = 1;
        if (last >= 0) next_[last] = r.id;
        else head_ = r.id;
        prev_[r.id] = last;
        last = r.id;
    }
}

double LogReplayer::next_event_time() const {
    return next_event_ < log_->events.size() ? log_->events[next_event_].time : kInfinity;
}

void LogReplayer::advance_to(double t) {
    while (next_event_ < log_->events.size() && log_->events[next_event_].time <= t) {
        const auto& e = log_->events[next_event_];
        const std::int64_t before = prev_[e.removed.front()];
        const std::int64_t after = next_[e.removed.back()];
        for (std::int64_t id : e.removed) alive_[id] = 0;
        std::int64_t cursor = before;
        for (const auto& r : e.inserted) {
            alive_[r.id] = 1;
            if (cursor >= 0) next_[cursor] = r.id;
            else head_ = r.id;
            prev_[r.id] = cursor;
            cursor = r.id;
        }
        if (cursor >= 0) next_[cursor] = after;
        else head_ = after;
        if (after >= 0) prev_[after] = cursor;
        ++next_event_;
    }
    time_ = std::max(time_, t);
}

PiecewiseConstantProfile LogReplayer::profile_at(double t) {
    if (t < time_ && next_event_ > 0 && log_->events[next_event_ - 1].time > t)
        throw internal_error("LogReplayer cannot rewind past applied events");
    advance_to(t);
    PiecewiseConstantProfile p;
    p.time = t;
    p.leftmost_state = log_->leftmost_state;
    for (std::int64_t id = head_; id >= 0; id = next_[id]) {
        const auto& r = records_[id];
        p.fronts.push_back({r.position_at(t), r.left_state, r.right_state, r.speed, r.kind});
    }
    return p;
}

double LogReplayer::trace_at(double t, double x, Side side) const {
    const double tol = position_tie(x);
    double state = log_->leftmost_state;
    for (std::int64_t id = head_; id >= 0; id = next_[id]) {
        const double pos = records_[id].position_at(t);
        if (side == Side::left ? pos < x - tol : pos <= x + tol) state = records_[id].right_state;
        else break;
    }
    return state;
}

std::int64_t LogReplayer::find_at_or_right_of(double x) const {
    const double tol = position_tie(x);
    for (std::int64_t id = head_; id >= 0; id = next_[id])
        if (records_[id].position_at(time_) >= x - tol) return id;
    return -1;
}

// ---------------------------------------------------------------------------
// Distances and decay
// ---------------------------------------------------------------------------

namespace {

double state_at(const PiecewiseConstantProfile& p, double x) { return trace(p, x, Side::right); }

double accumulate_metric(Metric metric, const std::vector<double>& cuts,
                         const std::vector<double>& diffs) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const double d = diffs[i];
        sum += (metric == Metric::L1 ? std::abs(d) : d * d) * len;
    }
    return metric == Metric::L1 ? sum : std::sqrt(sum);
}

}  // namespace

double compare_profiles(const PiecewiseConstantProfile& a, const PiecewiseConstantProfile& b,
                        Metric metric, Window window) {
    if (!(window.a < window.b)) throw input_error("compare_profiles: empty window");
    std::vector<double> cuts{window.a};
    for (const auto& f : a.fronts)
        if (f.position > window.a && f.position < window.b) cuts.push_back(f.position);
    for (const auto& f : b.fronts)
        if (f.position > window.a && f.position < window.b) cuts.push_back(f.position);
    cuts.push_back(window.b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> diffs;
    diffs.reserve(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        diffs.push_back(state_at(a, mid) - state_at(b, mid));
    }
    return accumulate_metric(metric, cuts, diffs);
}

double compare_profiles(const PiecewiseConstantProfile& a, const GridProfile& b, Metric metric,
                        Window window) {
    if (!(window.a < window.b)) throw input_error("compare_profiles: empty window");
    const double lo = std::max(window.a, b.x_left);
    const double hi = std::min(window.b, b.x_right());
    if (!(lo < hi)) throw input_error("compare_profiles: window does not meet the grid");

    auto grid_value = [&](double x) {
        int i = static_cast<int>(std::floor((x - b.x_left) / b.dx));
        i = std::clamp(i, 0, b.cells() - 1);
        return b.values[i];
    };
    std::vector<double> nodes{lo};
    for (int i = 0; i < b.cells(); ++i) {
        const double c = b.cell_center(i);
        if (c > lo && c < hi) nodes.push_back(c);
    }
    nodes.push_back(hi);

    double sum = 0.0;
    double prev = std::abs(state_at(a, nodes[0]) - grid_value(nodes[0]));
    if (metric == Metric::L2) prev *= prev;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        double cur = std::abs(state_at(a, nodes[i]) - grid_value(nodes[i]));
        if (metric == Metric::L2) cur *= cur;
        sum += 0.5 * (prev + cur) * (nodes[i] - nodes[i - 1]);
        prev = cur;
    }
    return metric == Metric::L1 ? sum : std::sqrt(sum);
}

double oleinik_ratio(const PiecewiseConstantProfile& profile,
                     const calculus::FluxEntropyPair& pair) {
    if (!(profile.time > 0.0)) throw input_error("oleinik_ratio: profile time must be positive");
    double max_up = 0.0;
    for (const auto& f : profile.fronts)
        max_up = std::max(max_up, f.right_state - f.left_state);
    if (max_up <= 0.0) return 0.0;

    // max_up > 0 implies at least one genuine jump, so the state box is
    // non-degenerate.
    const double alpha = calculus::bounds_on_box(pair, profile.min_state(), profile.max_state()).eps_A;

    // Net increase between distinct fronts, less one boundary jump at each
    // end; the within-jump quotient of the discrete profile is unbounded and
    // not the quantity Oleinik's estimate controls.
    const auto& fr = profile.fronts;
    double ratio = 0.0;
    for (std::size_t j = 1; j < fr.size(); ++j) {
        if (!(fr[j].right_state > fr[j].left_state)) continue;
        for (std::size_t i = 0; i < j; ++i) {
            const double dist = fr[j].position - fr[i].position;
            if (dist <= 0.0) continue;
            const double inc = fr[j].right_state - fr[i].left_state - 2.0 * max_up;
            if (inc <= 0.0) continue;
            ratio = std::max(ratio, inc / dist);
        }
    }
    return ratio * alpha * profile.time;
}

}  // namespace shockstab::solver
