// Independent cross-checks of the shift tracker: a crude sub-stepped
// Filippov integrator built only on one-sided traces, and refinement of the
// rarefaction step size. Both live here, away from the implementation path
// they validate.

#include <cmath>

#include "doctest.h"
#include "shockstab/shift_tracker.hpp"

using namespace shockstab;

namespace {

double euler_filippov_sup_dev(const solver::EvolutionLog& log,
                              const calculus::FluxEntropyPair& pair, double C, double x0,
                              double T, double dt, const tracking::ShiftCurve& reference) {
    solver::LogReplayer rep(log);
    double x = x0, t = 0.0;
    double sup = 0.0;
    while (t < T) {
        rep.advance_to(t);
        const double um = rep.trace_at(t, x, solver::Side::left);
        const double up = rep.trace_at(t, x, solver::Side::right);
        double v;
        if (um == up) {
            v = calculus::normalized_flux(pair, um, C);
        } else {
            const double s = solver::rankine_hugoniot_speed(pair, um, up);
            const double fm = calculus::normalized_flux(pair, um, C);
            const double fp = calculus::normalized_flux(pair, up, C);
            if (um > up && fp <= s && s <= fm) v = s;
            else if (std::max(fm, fp) < s) v = fm;
            else v = fp;
        }
        const double step = std::min(dt, T - t);
        x += v * step;
        t += step;
        sup = std::max(sup, std::abs(x - reference.position(t)));
    }
    return sup;
}

solver::Scenario mixed_scenario() {
    solver::Scenario sc;
    sc.id = "oracle";
    sc.pair = calculus::make_pair("burgers", "quadratic");
    sc.c_left = 1.0;
    sc.c_right = 0.0;
    sc.perturbation = {{-2.0, -1.0, -0.35}, {-0.8, 0.0, 0.5}};
    sc.horizon = 3.0;
    sc.delta_rare = 2e-3;
    return sc;
}

}  // namespace

TEST_CASE("event-driven curves match a sub-stepped Filippov integrator") {
    const auto sc = mixed_scenario();
    const auto evolution =
        solver::evolve_logged(solver::discretize_initial(sc), sc.pair, sc.horizon, sc.delta_rare);
    for (double C : {sc.c_left, sc.c_right}) {
        const auto exact =
            tracking::integrate_shift(evolution.log, sc.pair, C, 0.0, 0.0, sc.horizon);
        const double dev_coarse =
            euler_filippov_sup_dev(evolution.log, sc.pair, C, 0.0, sc.horizon, 1e-3, exact);
        const double dev_fine =
            euler_filippov_sup_dev(evolution.log, sc.pair, C, 0.0, sc.horizon, 5e-4, exact);
        CHECK(dev_coarse <= 1.5e-3);                  // O(dt) agreement
        CHECK(dev_fine <= 0.7 * dev_coarse + 1e-6);   // first-order in dt
    }
}

TEST_CASE("the admissible shift is stable under rarefaction refinement") {
    double prev = 0.0;
    double first_diff = 0.0, last_diff = 0.0;
    bool have_prev = false;
    for (double delta : {4e-3, 2e-3, 1e-3}) {
        solver::Scenario sc = mixed_scenario();
        sc.delta_rare = delta;
        const auto pr = tracking::track_shift_pair(sc);
        const double xbar = pr.xbar.position(sc.horizon);
        if (have_prev) {
            last_diff = std::abs(xbar - prev);
            if (first_diff == 0.0) first_diff = last_diff;
        }
        prev = xbar;
        have_prev = true;
    }
    CHECK(first_diff <= 1e-4);
    CHECK(last_diff <= first_diff + 1e-9);
}
