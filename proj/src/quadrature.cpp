#include "shockstab/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "shockstab/error.hpp"

namespace shockstab::quadrature {

namespace {

template <int N>
struct GaussRule {
    std::array<double, N> nodes;    // on [-1, 1]
    std::array<double, N> weights;
};

// Nodes are the roots of the Legendre polynomial P_N, found by Newton
// iteration from the Chebyshev initial guess; weights 2/((1-x^2) P_N'^2).
template <int N>
GaussRule<N> make_gauss_rule() {
    GaussRule<N> rule{};
    for (int k = 0; k < N; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= N; ++n) {
                double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[k] = x;
        rule.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule<7>& rule7() {
    static const GaussRule<7> r = make_gauss_rule<7>();
    return r;
}

const GaussRule<15>& rule15() {
    static const GaussRule<15> r = make_gauss_rule<15>();
    return r;
}

template <int N>
double apply(const GaussRule<N>& rule, const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < N; ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * sum;
}

struct Adaptive {
    const std::function<double(double)>& f;
    double rel_tol;
    std::size_t panels = 0;
    static constexpr std::size_t kMaxPanels = 200000;

    double run(double a, double b, double abs_budget, int depth) {
        if (++panels > kMaxPanels)
            throw internal_error("quadrature did not converge at the requested tolerance");
        const double coarse = apply(rule7(), f, a, b);
        const double fine = apply(rule15(), f, a, b);
        const double err = std::abs(fine - coarse);
        if (err <= abs_budget || err <= rel_tol * std::abs(fine) || depth >= 48) return fine;
        const double mid = 0.5 * (a + b);
        return run(a, mid, 0.5 * abs_budget, depth + 1) + run(mid, b, 0.5 * abs_budget, depth + 1);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol) {
    if (a == b) return 0.0;
    const double sign = (a < b) ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);
    Adaptive adaptive{f, tol.relative};
    return sign * adaptive.run(a, b, tol.absolute, 0);
}

double simpson_uniform(const std::function<double(double)>& f, double a, double b, int points) {
    if (points < 3 || points % 2 == 0)
        throw input_error("simpson rule needs an odd number of nodes >= 3");
    const int n = points - 1;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace shockstab::quadrature
