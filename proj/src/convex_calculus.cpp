#include "shockstab/convex_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockstab/error.hpp"
#include "shockstab/quadrature.hpp"

namespace shockstab::calculus {

namespace {

// Below this |U - C| the ratio F/eta(U|C) is numerically 0/0; switch to the
// expansion about the diagonal.
double diagonal_threshold(double C) { return 1e-6 * (1.0 + std::abs(C)); }

// Band around the diagonal where the analytic gradient formulas lose too many
// digits to cancellation; finite differences of f take over.
double gradient_threshold(double U, double C) { return 1e-4 * (1.0 + std::abs(U) + std::abs(C)); }

// f(U,C) expanded about the midpoint m = (U+C)/2:
//   f = A'(m) + A''(m) (U-C)/6 + O((U-C)^2),
// anchored so that f(C,C) = A'(C). Exact for quadratic fluxes.
double normalized_flux_expansion(const FluxEntropyPair& pair, double U, double C) {
    const double m = 0.5 * (U + C);
    return pair.flux_deriv(m) + pair.flux_second(m) * (U - C) / 6.0;
}

double quadrature_F(const FluxEntropyPair& pair, double U, double C) {
    const double etaC = pair.entropy_deriv(C);
    return quadrature::integrate(
        [&](double w) { return (pair.entropy_deriv(w) - etaC) * pair.flux_deriv(w); }, C, U);
}

// eta(U|C) evaluated without cancellation near the diagonal: the three-term
// formula loses all significant digits for |U-C| below ~1e-4, so switch to
// the integral Taylor remainder eta(U|C) = (U-C)^2 int_0^1 (1-s) eta''(C+s(U-C)) ds.
double rel_entropy_stable(const FluxEntropyPair& pair, double U, double C) {
    const double d = U - C;
    if (std::abs(d) > 1e-3 * (1.0 + std::abs(C)))
        return pair.entropy(U) - pair.entropy(C) - pair.entropy_deriv(C) * d;
    return d * d *
           quadrature::integrate(
               [&](double s) { return (1.0 - s) * pair.entropy_second(C + s * d); }, 0.0, 1.0);
}

double normalized_flux_impl(const FluxEntropyPair& pair, double U, double C, bool allow_closed) {
    if (std::abs(U - C) <= diagonal_threshold(C))
        return normalized_flux_expansion(pair, U, C);
    const double F = (allow_closed && pair.closed_rel_entropy_flux)
                         ? pair.closed_rel_entropy_flux(U, C)
                         : quadrature_F(pair, U, C);
    return F / rel_entropy_stable(pair, U, C);
}

double fd_step(double U, double C) { return 1e-4 * (1.0 + std::abs(U) + std::abs(C)); }

// Second-order one-sided difference, used exactly on the diagonal.
double one_sided_fd(const std::function<double(double)>& f, double x, double h) {
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
}

double central_fd(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct Extrema {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
};

Extrema sample_extrema(const ScalarFn& f, double lower, double upper, int n) {
    Extrema e;
    const double mid = 0.5 * (lower + upper);
    const double half = 0.5 * (upper - lower);
    for (int k = 0; k < n; ++k) {
        // Chebyshev-Lobatto nodes: clustered at the ends, include both
        // endpoints and (n odd) the midpoint.
        const double x = mid - half * std::cos(M_PI * k / (n - 1));
        const double v = f(x);
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
    }
    return e;
}

constexpr int kBoxSamples = 4097;
constexpr int kGapGridPoints = 2049;

}  // namespace

FluxEntropyPair make_flux(const std::string& flux_name) {
    FluxEntropyPair p;
    if (flux_name == "burgers") {
        p.flux = [](double u) { return 0.5 * u * u; };
        p.flux_deriv = [](double u) { return u; };
        p.flux_second = [](double) { return 1.0; };
    } else if (flux_name == "quartic") {
        p.flux = [](double u) { return 0.5 * u * u + u * u * u * u / 12.0; };
        p.flux_deriv = [](double u) { return u + u * u * u / 3.0; };
        p.flux_second = [](double u) { return 1.0 + u * u; };
    } else if (flux_name == "cosh") {
        p.flux = [](double u) { return std::cosh(u); };
        p.flux_deriv = [](double u) { return std::sinh(u); };
        p.flux_second = [](double u) { return std::cosh(u); };
    } else {
        throw input_error("unknown flux '" + flux_name + "'");
    }
    p.name = flux_name;
    return p;
}

FluxEntropyPair make_pair(const std::string& flux_name, const std::string& entropy_name) {
    FluxEntropyPair p = make_flux(flux_name);
    double entropy_scale = 0.0;  // nonzero for eta = scale * U^2 / 2
    if (entropy_name == "quadratic_half") {
        p.entropy = [](double u) { return 0.5 * u * u; };
        p.entropy_deriv = [](double u) { return u; };
        p.entropy_second = [](double) { return 1.0; };
        entropy_scale = 1.0;
    } else if (entropy_name == "quadratic") {
        p.entropy = [](double u) { return u * u; };
        p.entropy_deriv = [](double u) { return 2.0 * u; };
        p.entropy_second = [](double) { return 2.0; };
        entropy_scale = 2.0;
    } else if (entropy_name == "quartic_entropy") {
        p.entropy = [](double u) { return u * u * u * u + u * u; };
        p.entropy_deriv = [](double u) { return 4.0 * u * u * u + 2.0 * u; };
        p.entropy_second = [](double u) { return 12.0 * u * u + 2.0; };
    } else {
        throw input_error("unknown entropy '" + entropy_name + "'");
    }
    p.name = flux_name + "/" + entropy_name;

    if (flux_name == "burgers" && entropy_scale > 0.0) {
        // F = scale*(2U^3 - 3CU^2 + C^3)/6 and f = (2U + C)/3; the f closed
        // form is entropy-scale invariant.
        const double s = entropy_scale;
        p.closed_rel_entropy_flux = [s](double U, double C) {
            return s * (2.0 * U * U * U - 3.0 * C * U * U + C * C * C) / 6.0;
        };
        p.closed_normalized_flux = [](double U, double C) { return (2.0 * U + C) / 3.0; };
    }
    return p;
}

std::vector<std::string> flux_names() { return {"burgers", "quartic", "cosh"}; }
std::vector<std::string> entropy_names() { return {"quadratic_half", "quadratic", "quartic_entropy"}; }

void validate_pair(const FluxEntropyPair& pair, double lower, double upper) {
    if (!(lower < upper)) throw input_error("validate_pair: empty interval");
    const int n = 129;
    const double h_rel = 1e-5;
    auto check = [&](const ScalarFn& f, const ScalarFn& fp, const char* what) {
        for (int k = 0; k < n; ++k) {
            const double x = lower + (upper - lower) * k / (n - 1);
            const double h = h_rel * (1.0 + std::abs(x));
            const double fd = central_fd(f, x, h);
            const double an = fp(x);
            if (std::abs(fd - an) > 1e-6 * (1.0 + std::abs(an)))
                throw input_error(std::string("derivative mismatch in ") + what);
        }
    };
    check(pair.flux, pair.flux_deriv, "flux/flux_deriv");
    check(pair.flux_deriv, pair.flux_second, "flux_deriv/flux_second");
    check(pair.entropy, pair.entropy_deriv, "entropy/entropy_deriv");
    check(pair.entropy_deriv, pair.entropy_second, "entropy_deriv/entropy_second");
    for (int k = 0; k < n; ++k) {
        const double x = lower + (upper - lower) * k / (n - 1);
        if (!(pair.flux_second(x) > 0.0))
            throw input_error("flux is not strictly convex on the requested interval");
        if (!(pair.entropy_second(x) > 0.0))
            throw input_error("entropy is not strictly convex on the requested interval");
    }
}

double rel_entropy(const FluxEntropyPair& pair, double U, double C) {
    return pair.entropy(U) - pair.entropy(C) - pair.entropy_deriv(C) * (U - C);
}

double rel_entropy_flux(const FluxEntropyPair& pair, double U, double C) {
    if (U == C) return 0.0;
    if (pair.closed_rel_entropy_flux) return pair.closed_rel_entropy_flux(U, C);
    return quadrature_F(pair, U, C);
}

double rel_entropy_flux_quadrature(const FluxEntropyPair& pair, double U, double C) {
    if (U == C) return 0.0;
    return quadrature_F(pair, U, C);
}

double normalized_flux(const FluxEntropyPair& pair, double U, double C) {
    if (pair.closed_normalized_flux) return pair.closed_normalized_flux(U, C);
    return normalized_flux_impl(pair, U, C, true);
}

double normalized_flux_quadrature(const FluxEntropyPair& pair, double U, double C) {
    return normalized_flux_impl(pair, U, C, false);
}

NormalizedFluxGrad normalized_flux_grad(const FluxEntropyPair& pair, double U, double C) {
    NormalizedFluxGrad g;
    auto f_of_U = [&](double u) { return normalized_flux(pair, u, C); };
    auto f_of_C = [&](double c) { return normalized_flux(pair, U, c); };
    const double h = fd_step(U, C);

    if (U == C) {
        g.df_dU = one_sided_fd(f_of_U, U, h);
        g.df_dC = one_sided_fd(f_of_C, C, h);
        return g;
    }
    if (std::abs(U - C) <= gradient_threshold(U, C)) {
        g.df_dU = central_fd(f_of_U, U, h);
        g.df_dC = central_fd(f_of_C, C, h);
        return g;
    }

    const double eta_rel = rel_entropy_stable(pair, U, C);
    const double f = normalized_flux(pair, U, C);
    const double phi_UUC = (pair.entropy_deriv(U) - pair.entropy_deriv(C)) / eta_rel;
    g.df_dU = phi_UUC * (pair.flux_deriv(U) - f);
    const double secant = (pair.flux(U) - pair.flux(C)) / (U - C);
    g.df_dC = -pair.entropy_second(C) * (U - C) / eta_rel * (secant - f);
    return g;
}

BoundsBox bounds_on_box(const FluxEntropyPair& pair, double lower, double upper) {
    if (!(lower < upper)) throw input_error("bounds_on_box: lower must be strictly below upper");

    const Extrema a2 = sample_extrema(pair.flux_second, lower, upper, kBoxSamples);
    const Extrema e2 = sample_extrema(pair.entropy_second, lower, upper, kBoxSamples);
    const Extrema a1 = sample_extrema([&](double x) { return std::abs(pair.flux_deriv(x)); },
                                      lower, upper, kBoxSamples);
    if (!(a2.min > 0.0)) throw input_error("flux is not strictly convex on the box");
    if (!(e2.min > 0.0)) throw input_error("entropy is not strictly convex on the box");

    // Safety margin proportional to the observed spread: constants stay exact
    // for constant second derivatives, and widen where sampling could miss an
    // extremum. Lower bounds stay positive.
    auto widen = [](const Extrema& e) {
        const double margin = 0.01 * (e.max - e.min);
        return Extrema{std::max(e.min - margin, 0.5 * e.min), e.max + margin};
    };
    const Extrema a2w = widen(a2), e2w = widen(e2), a1w = widen(a1);

    BoundsBox box;
    box.lower = lower;
    box.upper = upper;
    box.eps_A = a2w.min;
    box.L_A = a2w.max;
    box.eps_eta = e2w.min;
    box.L_eta = e2w.max;
    box.eps_fC = box.eps_A * box.eps_eta * box.eps_eta / (3.0 * box.L_eta * box.L_eta);
    box.L_fU = box.L_eta * box.L_A / box.eps_eta;
    box.sup_Aprime = a1w.max;
    return box;
}

MonotoneGap monotone_gap(const SampledFn& g, const SampledFn& h) {
    const int n = kGapGridPoints;
    double min_gp = std::numeric_limits<double>::infinity();
    double min_hp = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) / (n - 1);
        min_gp = std::min(min_gp, g.deriv(s));
        min_hp = std::min(min_hp, h.deriv(s));
    }
    if (!(min_gp > 0.0)) throw input_error("monotone_gap: g' must be positive on [0,1]");
    if (!(min_hp > 0.0)) throw input_error("monotone_gap: h' must be positive on [0,1]");

    const double mass = quadrature::simpson_uniform(g.value, 0.0, 1.0, n);
    if (std::abs(mass - 1.0) > 1e-8)
        throw input_error("monotone_gap: g must integrate to 1 over [0,1]");

    const double gh = quadrature::simpson_uniform(
        [&](double s) { return g.value(s) * h.value(s); }, 0.0, 1.0, n);
    const double h_only = quadrature::simpson_uniform(h.value, 0.0, 1.0, n);

    MonotoneGap out;
    out.eps_g = min_gp;
    out.eps_h = min_hp;
    out.gap = gh - h_only;
    out.bound = min_gp * min_hp / 12.0;
    return out;
}

}  // namespace shockstab::calculus
