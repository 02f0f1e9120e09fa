#include <algorithm>
#include <cmath>

#include "shockstab/error.hpp"
#include "shockstab/scalar_solver.hpp"

namespace shockstab::solver {

namespace {

// Godunov interface flux for a strictly convex flux. The rarefaction case
// needs the sonic state A'(u*) = 0, found by bisection (A' is increasing).
double godunov_flux(const calculus::FluxEntropyPair& pair, double uL, double uR) {
    if (uL == uR) return pair.flux(uL);
    if (uL > uR) {
        const double s = rankine_hugoniot_speed(pair, uL, uR);
        return s >= 0.0 ? pair.flux(uL) : pair.flux(uR);
    }
    if (pair.flux_deriv(uL) >= 0.0) return pair.flux(uL);
    if (pair.flux_deriv(uR) <= 0.0) return pair.flux(uR);
    double a = uL, b = uR;
    for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++i) {
        const double m = 0.5 * (a + b);
        (pair.flux_deriv(m) < 0.0 ? a : b) = m;
    }
    return pair.flux(0.5 * (a + b));
}

// Exact cell averages of a piecewise-constant profile.
std::vector<double> average_on_cells(const PiecewiseConstantProfile& p, double x_left, double dx,
                                     int n) {
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double a = x_left + i * dx;
        const double b = a + dx;
        double sum = 0.0;
        double cursor = a;
        double state = trace(p, a, Side::right);
        for (const auto& f : p.fronts) {
            if (f.position <= cursor) continue;
            if (f.position >= b) break;
            sum += state * (f.position - cursor);
            cursor = f.position;
            state = f.right_state;
        }
        sum += state * (b - cursor);
        out[i] = sum / dx;
    }
    return out;
}

}  // namespace

GridProfile godunov_reference(const Scenario& scenario, int cells, double cfl) {
    if (cells < 16) throw input_error("godunov_reference: need at least 16 cells");
    if (!(cfl > 0.0 && cfl <= 0.9)) throw input_error("godunov_reference: cfl must be in (0, 0.9]");
    scenario.validate();

    double support_lo = 0.0, support_hi = 0.0;
    for (const auto& p : scenario.perturbation) {
        support_lo = std::min(support_lo, p.left);
        support_hi = std::max(support_hi, p.right);
    }
    const double lo_state = std::min(scenario.min_initial(), scenario.c_right);
    const double hi_state = std::max(scenario.max_initial(), scenario.c_left);
    double wave_speed = 1e-6;
    for (int k = 0; k <= 256; ++k) {
        const double u = lo_state + (hi_state - lo_state) * k / 256.0;
        wave_speed = std::max(wave_speed, std::abs(scenario.pair.flux_deriv(u)));
    }
    const double pad = 1.05 * wave_speed * scenario.horizon + 1.0;

    GridProfile grid;
    grid.x_left = support_lo - pad;
    grid.dx = (support_hi + pad - grid.x_left) / cells;
    grid.time = 0.0;

    const PiecewiseConstantProfile initial = discretize_initial(scenario);
    grid.values = average_on_cells(initial, grid.x_left, grid.dx, cells);

    std::vector<double> flux(cells + 1);
    while (grid.time < scenario.horizon) {
        double amax = 1e-12;
        for (double u : grid.values) amax = std::max(amax, std::abs(scenario.pair.flux_deriv(u)));
        const double dt = std::min(cfl * grid.dx / amax, scenario.horizon - grid.time);

        flux[0] = godunov_flux(scenario.pair, grid.values.front(), grid.values.front());
        flux[cells] = godunov_flux(scenario.pair, grid.values.back(), grid.values.back());
        for (int i = 1; i < cells; ++i)
            flux[i] = godunov_flux(scenario.pair, grid.values[i - 1], grid.values[i]);

        const double r = dt / grid.dx;
        for (int i = 0; i < cells; ++i) grid.values[i] -= r * (flux[i + 1] - flux[i]);
        grid.time += dt;
        if (dt <= 0.0) break;
    }
    return grid;
}

}  // namespace shockstab::solver
