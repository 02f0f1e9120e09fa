#ifndef SHOCKSTAB_CONVEX_CALCULUS_HPP
#define SHOCKSTAB_CONVEX_CALCULUS_HPP

#include <functional>
#include <string>
#include <vector>

namespace shockstab::calculus {

using ScalarFn = std::function<double(double)>;

/// A strictly convex flux A paired with a strictly convex entropy eta,
/// with first and second derivative evaluators for both.
struct FluxEntropyPair {
    std::string name;

    ScalarFn flux;            // A
    ScalarFn flux_deriv;      // A'
    ScalarFn flux_second;     // A''
    ScalarFn entropy;         // eta
    ScalarFn entropy_deriv;   // eta'
    ScalarFn entropy_second;  // eta''

    // Exact kernels, wired by the registry when a closed form is known
    // (Burgers flux with a quadratic entropy). Empty otherwise.
    std::function<double(double, double)> closed_rel_entropy_flux;  // F(U,C)
    std::function<double(double, double)> closed_normalized_flux;   // f(U,C)

    bool has_closed_forms() const {
        return static_cast<bool>(closed_rel_entropy_flux) &&
               static_cast<bool>(closed_normalized_flux);
    }
};

/// Convexity and derivative bounds of a pair sampled over a state box.
/// Lower bounds are safe underestimates, upper bounds safe overestimates
/// (spread-proportional safety margin around the sampled extrema).
struct BoundsBox {
    double lower = 0.0;
    double upper = 0.0;
    double eps_A = 0.0;       // inf A'' on the box
    double L_A = 0.0;         // sup A''
    double eps_eta = 0.0;     // inf eta''
    double L_eta = 0.0;       // sup eta''
    double eps_fC = 0.0;      // lower bound on df/dC: eps_A*eps_eta^2/(3*L_eta^2)
    double L_fU = 0.0;        // upper bound on df/dU: L_eta*L_A/eps_eta
    double sup_Aprime = 0.0;  // sup |A'|
};

/// Flux registry names: "burgers", "quartic", "cosh".
FluxEntropyPair make_flux(const std::string& flux_name);
/// Entropy registry names: "quadratic_half", "quadratic", "quartic_entropy".
/// Builds the full pair and wires closed forms when available.
FluxEntropyPair make_pair(const std::string& flux_name, const std::string& entropy_name);

std::vector<std::string> flux_names();
std::vector<std::string> entropy_names();

/// Checks strict convexity and derivative consistency of the evaluators by
/// sampling on [lower, upper]. Throws an input error on violation.
void validate_pair(const FluxEntropyPair& pair, double lower, double upper);

/// eta(U|C) = eta(U) - eta(C) - eta'(C) (U - C). Nonnegative, zero iff U = C.
double rel_entropy(const FluxEntropyPair& pair, double U, double C);

/// F(U,C) = integral_C^U (eta'(w) - eta'(C)) A'(w) dw.
/// Uses the registered closed form when present, adaptive quadrature otherwise.
double rel_entropy_flux(const FluxEntropyPair& pair, double U, double C);
/// Always takes the quadrature route, bypassing any registered closed form.
double rel_entropy_flux_quadrature(const FluxEntropyPair& pair, double U, double C);

/// f(U,C) = F(U,C)/eta(U|C) away from the diagonal; f(C,C) = A'(C); near the
/// diagonal a midpoint-anchored expansion keeps the evaluation well posed.
double normalized_flux(const FluxEntropyPair& pair, double U, double C);
double normalized_flux_quadrature(const FluxEntropyPair& pair, double U, double C);

struct NormalizedFluxGrad {
    double df_dU = 0.0;
    double df_dC = 0.0;
};

/// Partial derivatives of the normalized flux. Analytic formulas away from
/// the diagonal; finite differences of normalized_flux near/at U = C.
NormalizedFluxGrad normalized_flux_grad(const FluxEntropyPair& pair, double U, double C);

/// Samples A'', eta'' and |A'| on [lower, upper] (4097 Chebyshev nodes) and
/// derives the Lipschitz/monotonicity constants of the normalized flux.
/// Throws an input error on a degenerate box or detected non-convexity.
BoundsBox bounds_on_box(const FluxEntropyPair& pair, double lower, double upper);

/// A C^1 function on [0,1] given by value and derivative evaluators.
struct SampledFn {
    ScalarFn value;
    ScalarFn deriv;
};

struct MonotoneGap {
    double gap = 0.0;    // integral of g*h minus integral of h
    double bound = 0.0;  // eps_g * eps_h / 12
    double eps_g = 0.0;
    double eps_h = 0.0;
};

/// Evaluates the monotone-correlation gap of two increasing C^1 functions on
/// [0,1] with integral of g equal to 1, against its lower bound eps_g*eps_h/12.
/// Preconditions checked on a 2049-node uniform grid.
MonotoneGap monotone_gap(const SampledFn& g, const SampledFn& h);

}  // namespace shockstab::calculus

#endif
