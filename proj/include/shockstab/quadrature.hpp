#ifndef SHOCKSTAB_QUADRATURE_HPP
#define SHOCKSTAB_QUADRATURE_HPP

#include <functional>

namespace shockstab::quadrature {

struct Tolerance {
    double absolute = 1e-10;
    double relative = 1e-9;
};

/// Adaptive Gauss-Legendre integration of f over [a, b].
///
/// Panels are bisected until the local two-level estimate meets the
/// tolerance. Throws shockstab::Error (internal) if the panel budget is
/// exhausted before convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 Tolerance tol = Tolerance{});

/// Composite Simpson rule over a uniform grid with `points` nodes on [a, b].
/// `points` must be odd and >= 3.
double simpson_uniform(const std::function<double(double)>& f, double a, double b, int points);

}  // namespace shockstab::quadrature

#endif
