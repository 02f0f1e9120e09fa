#include <cmath>

#include "doctest.h"
#include "shockstab/error.hpp"
#include "shockstab/quadrature.hpp"

using namespace shockstab;

TEST_CASE("adaptive integration matches closed forms") {
    CHECK(quadrature::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(quadrature::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // orientation
    CHECK(quadrature::integrate([](double x) { return x; }, 1.0, 0.0) ==
          doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(quadrature::integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("adaptive integration resolves a sharp kernel") {
    // Narrow Gaussian bump away from panel midpoints.
    const double v = quadrature::integrate(
        [](double x) { return std::exp(-1e4 * (x - 0.337) * (x - 0.337)); }, 0.0, 1.0);
    CHECK(v == doctest::Approx(std::sqrt(M_PI) / 100.0).epsilon(1e-9));
}

TEST_CASE("non-convergence is a diagnostic error, not a wrong answer") {
    // White-noise integrand: the two-level error estimate never settles.
    auto noise = [](double x) {
        std::uint64_t h = static_cast<std::uint64_t>(x * 1e9) * 0x9e3779b97f4a7c15ULL;
        h ^= h >> 29;
        h *= 0xbf58476d1ce4e5b9ULL;
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    };
    CHECK_THROWS_AS(quadrature::integrate(noise, 0.0, 1.0), Error);
}

TEST_CASE("simpson rule on the fixed grid") {
    CHECK(quadrature::simpson_uniform([](double x) { return x * x * x; }, 0.0, 1.0, 2049) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(quadrature::simpson_uniform([](double) { return 1.0; }, 0.0, 1.0, 4),
                    Error);
}
