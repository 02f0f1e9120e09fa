#include <cmath>
#include <random>

#include "doctest.h"
#include "shockstab/error.hpp"
#include "shockstab/shift_tracker.hpp"

using namespace shockstab;
using solver::FrontKind;
using solver::PiecewiseConstantProfile;
using solver::Scenario;
using tracking::CurveMode;
using tracking::SpeedKind;

namespace {

Scenario burgers_scenario(double cl, double cr, std::vector<solver::PerturbationInterval> pert,
                          double T, double delta) {
    Scenario sc;
    sc.id = "tracker_test";
    sc.pair = calculus::make_pair("burgers", "quadratic_half");
    sc.c_left = cl;
    sc.c_right = cr;
    sc.perturbation = std::move(pert);
    sc.horizon = T;
    sc.delta_rare = delta;
    return sc;
}

PiecewiseConstantProfile single_front(double pos, double uL, double uR, double speed) {
    PiecewiseConstantProfile p;
    p.leftmost_state = uL;
    p.fronts.push_back({pos, uL, uR, speed, uL > uR ? FrontKind::shock : FrontKind::rarefaction_step});
    return p;
}

}  // namespace

TEST_CASE("filippov speed decisions") {
    const auto pair = calculus::make_pair("burgers", "quadratic_half");

    SUBCASE("continuity point takes the free speed") {
        PiecewiseConstantProfile p;
        p.leftmost_state = 1.0;  // constant state
        const auto d = tracking::filippov_speed(pair, p, 0.3, 0.0);
        CHECK(d.kind == SpeedKind::free_flow);
        CHECK(d.speed == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    }

    SUBCASE("trapped shock rides at the Rankine-Hugoniot speed") {
        const auto p = single_front(0.0, 1.0, 0.0, 0.5);
        const auto d = tracking::filippov_speed(pair, p, 0.0, 0.5);
        CHECK(d.kind == SpeedKind::ride);
        CHECK(d.speed == doctest::Approx(0.5).epsilon(1e-15));
    }

    SUBCASE("excluded trapping interval detaches on the slow side") {
        // shock 1 -> 0.9, RH = 0.95; f(1,-5) = -1, f(0.9,-5) = -16/15
        const auto p = single_front(0.0, 1.0, 0.9, 0.95);
        const auto d = tracking::filippov_speed(pair, p, 0.0, -5.0);
        CHECK(d.kind == SpeedKind::detach_left);
        CHECK(d.speed == doctest::Approx(-1.0).epsilon(1e-14));
    }

    SUBCASE("increasing jumps never trap: pass-through") {
        // step 0.4 -> 0.5, RH = 0.45; f(0.4, 2) = 0.933 and f(0.5, 2) = 1:
        // both exceed the front speed, so the curve passes to the right.
        const auto p = single_front(0.0, 0.4, 0.5, 0.45);
        const auto d = tracking::filippov_speed(pair, p, 0.0, 2.0);
        CHECK(d.kind == SpeedKind::detach_right);
        CHECK(d.speed == doctest::Approx(1.0).epsilon(1e-14));

        // anchored far left instead: both free speeds fall behind the front
        const auto d2 = tracking::filippov_speed(pair, p, 0.0, -2.0);
        CHECK(d2.kind == SpeedKind::detach_left);
        CHECK(d2.speed == doctest::Approx((0.8 - 2.0) / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("integrate_shift rides an unperturbed shock exactly") {
    const auto sc = burgers_scenario(1.0, 0.0, {}, 10.0, 0.5);
    const auto evolution =
        solver::evolve_logged(solver::discretize_initial(sc), sc.pair, 10.0, sc.delta_rare);
    for (double C : {1.0, 0.0}) {
        const auto curve = tracking::integrate_shift(evolution.log, sc.pair, C, 0.0, 0.0, 10.0);
        CHECK(curve.breakpoints.front().mode == CurveMode::riding_shock);
        for (double t : {0.0, 1.0, 2.5, 5.0, 7.75, 10.0})
            CHECK(std::abs(curve.position(t) - 0.5 * t) <= 1e-10);
    }
}

TEST_CASE("integrate_shift in a constant field is a straight line") {
    PiecewiseConstantProfile constant;
    constant.leftmost_state = 0.7;
    const auto pair = calculus::make_pair("burgers", "quadratic_half");
    const auto evolution = solver::evolve_logged(constant, pair, 4.0, 0.1);
    const auto curve = tracking::integrate_shift(evolution.log, pair, 0.1, -1.0, 0.0, 4.0);
    const double v = calculus::normalized_flux(pair, 0.7, 0.1);
    CHECK(curve.breakpoints.size() == 2);
    for (double t : {0.0, 1.0, 4.0})
        CHECK(curve.position(t) == doctest::Approx(-1.0 + v * t).epsilon(1e-14));

    const auto point = tracking::integrate_shift(evolution.log, pair, 0.1, -1.0, 2.0, 2.0);
    CHECK(point.breakpoints.size() == 1);
}

TEST_CASE("shift pair on the bare shock is identically sigma t") {
    const auto sc = burgers_scenario(1.0, 0.0, {}, 6.0, 0.5);
    const auto pair_result = tracking::track_shift_pair(sc);
    CHECK(pair_result.max_crossing <= 1e-12);
    for (double t : {0.0, 1.0, 3.0, 6.0}) {
        CHECK(std::abs(pair_result.left.position(t) - 0.5 * t) <= 1e-12);
        CHECK(std::abs(pair_result.right.position(t) - 0.5 * t) <= 1e-12);
        CHECK(std::abs(pair_result.xbar.position(t)) <= 1e-12);
    }
}

TEST_CASE("square perturbation: curves never cross and satisfy the inclusion") {
    const auto sc = burgers_scenario(1.0, 0.0, {{-1.0, 0.0, 0.5}}, 5.0, 0.01);
    const auto evolution =
        solver::evolve_logged(solver::discretize_initial(sc), sc.pair, 5.0, sc.delta_rare);
    const auto pr = tracking::track_shift_pair(evolution.log, sc.pair, 1.0, 0.0, sc.sigma());

    CHECK(pr.max_crossing <= 1e-9);

    // sandwich x_R <= xbar + sigma t <= x_L at breakpoint times
    for (const auto& bp : pr.xbar.breakpoints) {
        const double xl = pr.left.position(bp.time);
        const double xr = pr.right.position(bp.time);
        const double mid = bp.position + pr.sigma * bp.time;
        CHECK(xr <= mid + 1e-9);
        CHECK(mid <= xl + 1e-9);
    }

    // Lipschitz bound: segment speeds within sup |f| over the state box
    const double radius = 2.5;
    double sup_f = 0.0;
    for (int i = 0; i <= 64; ++i)
        for (int j = 0; j <= 64; ++j) {
            const double u = -radius + 2.0 * radius * i / 64.0;
            const double c = -radius + 2.0 * radius * j / 64.0;
            sup_f = std::max(sup_f, std::abs(calculus::normalized_flux(sc.pair, u, c)));
        }
    CHECK(pr.left.max_abs_speed() <= sup_f + 1e-12);
    CHECK(pr.right.max_abs_speed() <= sup_f + 1e-12);

    // Filippov inclusion at sampled interior times, away from breakpoints.
    // The replayer only moves forward, so sample in ascending order.
    solver::LogReplayer replayer(evolution.log);
    std::mt19937_64 rng(17);
    std::vector<double> sample_times;
    for (int k = 0; k < 1000; ++k)
        sample_times.push_back(5.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53));
    std::sort(sample_times.begin(), sample_times.end());
    int checked = 0;
    for (const double t : sample_times) {
        for (const auto* curve : {&pr.left, &pr.right}) {
            bool near_bp = false;
            for (const auto& bp : curve->breakpoints)
                if (std::abs(bp.time - t) < 1e-9) near_bp = true;
            if (near_bp) continue;
            const auto profile = replayer.profile_at(t);
            const double x = curve->position(t);
            const double f_plus = calculus::normalized_flux(
                sc.pair, solver::trace(profile, x, solver::Side::right), curve->anchor_state);
            const double f_minus = calculus::normalized_flux(
                sc.pair, solver::trace(profile, x, solver::Side::left), curve->anchor_state);
            const double v = curve->speed_at(t);
            CHECK(v >= std::min(f_plus, f_minus) - 1e-9);
            CHECK(v <= std::max(f_plus, f_minus) + 1e-9);
            ++checked;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("free speeds are strictly increasing in the anchor") {
    const auto pair = calculus::make_pair("quartic", "quartic_entropy");
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const double u = -2.0 + 4.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const double c = -2.0 + 3.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const double cp = c + 0.5;
        CHECK(calculus::normalized_flux(pair, u, c) < calculus::normalized_flux(pair, u, cp));
    }
}

TEST_CASE("riding mode reproduces the front speed exactly") {
    const auto sc = burgers_scenario(1.0, 0.0, {{-1.0, 0.0, 0.5}}, 5.0, 0.05);
    const auto evolution =
        solver::evolve_logged(solver::discretize_initial(sc), sc.pair, 5.0, sc.delta_rare);
    solver::LogReplayer replayer(evolution.log);
    const auto curve = tracking::integrate_shift(evolution.log, sc.pair, 1.0, 0.0, 0.0, 5.0);
    for (std::size_t i = 0; i + 1 < curve.breakpoints.size(); ++i) {
        const auto& bp = curve.breakpoints[i];
        if (bp.mode != CurveMode::riding_shock) continue;
        const double t_mid = 0.5 * (bp.time + curve.breakpoints[i + 1].time);
        const auto profile = replayer.profile_at(t_mid);
        const double uL = solver::trace(profile, curve.position(t_mid), solver::Side::left);
        const double uR = solver::trace(profile, curve.position(t_mid), solver::Side::right);
        REQUIRE(uL > uR);
        CHECK(std::abs(bp.speed - solver::rankine_hugoniot_speed(sc.pair, uL, uR)) <= 1e-12);
    }
}

TEST_CASE("uniqueness probe") {
    SUBCASE("deterministic away from discontinuities") {
        const auto sc = burgers_scenario(1.0, 0.0, {}, 4.0, 0.5);
        const auto probe = tracking::uniqueness_probe(sc, 0.0, -3.0, 0.3, 4);
        CHECK(probe.spread == 0.0);
        CHECK_FALSE(probe.non_unique_start);
    }
    SUBCASE("trapped trajectories coincide for t0 > 0") {
        const auto sc = burgers_scenario(1.0, 0.0, {}, 4.0, 0.5);
        const auto probe = tracking::uniqueness_probe(sc, 0.5, 0.25, 1.0, 4);
        CHECK(probe.spread <= 1e-8 * (4.0 - 0.5));
        CHECK_FALSE(probe.non_unique_start);
    }
    SUBCASE("rarefaction center at t0 = 0 is flagged non-unique") {
        // up-jump 1 -> 1.5 at x = -1; anchor inside the fan funnel
        const auto sc = burgers_scenario(1.0, 0.0, {{-1.0, -0.2, 0.5}}, 1.0, 0.05);
        const auto probe = tracking::uniqueness_probe(sc, 0.0, -1.0, 1.2, 4);
        CHECK(probe.non_unique_start);
        CHECK(probe.spread > 0.0);
    }
}

TEST_CASE("integration bounds are validated") {
    const auto sc = burgers_scenario(1.0, 0.0, {}, 2.0, 0.5);
    const auto evolution =
        solver::evolve_logged(solver::discretize_initial(sc), sc.pair, 2.0, sc.delta_rare);
    CHECK_THROWS_AS(tracking::integrate_shift(evolution.log, sc.pair, 1.0, 0.0, 0.0, 5.0),
                    Error);
}
