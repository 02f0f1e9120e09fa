#include <cmath>
#include <random>

#include "doctest.h"
#include "shockstab/convex_calculus.hpp"
#include "shockstab/error.hpp"

using namespace shockstab;
using calculus::FluxEntropyPair;

namespace {

// Burgers flux with an ad-hoc entropy, no closed forms registered: exercises
// the quadrature route.
FluxEntropyPair custom_pair(calculus::ScalarFn eta, calculus::ScalarFn eta1,
                            calculus::ScalarFn eta2) {
    FluxEntropyPair p = calculus::make_flux("burgers");
    p.entropy = std::move(eta);
    p.entropy_deriv = std::move(eta1);
    p.entropy_second = std::move(eta2);
    p.name = "custom";
    return p;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("relative entropy closed cases") {
    const auto p = calculus::make_pair("burgers", "quadratic_half");
    CHECK(calculus::rel_entropy(p, 3.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(calculus::rel_entropy(p, 0.7, 0.7) == 0.0);

    const auto quartic = custom_pair([](double u) { return u * u * u * u; },
                                     [](double u) { return 4.0 * u * u * u; },
                                     [](double u) { return 12.0 * u * u; });
    CHECK(calculus::rel_entropy(quartic, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("relative entropy nonnegativity, zero only on the diagonal") {
    std::mt19937_64 rng(11);
    for (const auto& flux : calculus::flux_names())
        for (const auto& entropy : calculus::entropy_names()) {
            const auto p = calculus::make_pair(flux, entropy);
            for (int k = 0; k < 200; ++k) {
                const double u = uniform(rng, -3.0, 3.0);
                const double c = uniform(rng, -3.0, 3.0);
                const double e = calculus::rel_entropy(p, u, c);
                CHECK(e >= 0.0);
                if (std::abs(u - c) > 1e-3) CHECK(e > 0.0);
            }
        }
}

TEST_CASE("relative entropy flux against the polynomial antiderivative") {
    const auto p = calculus::make_pair("burgers", "quadratic_half");
    // F = (2U^3 - 3CU^2 + C^3)/6 for Burgers with eta = U^2/2
    auto exact = [](double u, double c) {
        return (2.0 * u * u * u - 3.0 * c * u * u + c * c * c) / 6.0;
    };
    CHECK(calculus::rel_entropy_flux(p, 1.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(calculus::rel_entropy_flux(p, 0.4, 0.4) == 0.0);
    CHECK(calculus::rel_entropy_flux(p, 2.0, 1.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    // quadrature route agrees with the registered closed form
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const double u = uniform(rng, -2.5, 2.5);
        const double c = uniform(rng, -2.5, 2.5);
        CHECK(calculus::rel_entropy_flux_quadrature(p, u, c) ==
              doctest::Approx(exact(u, c)).epsilon(1e-11));
    }
}

TEST_CASE("normalized flux closed form and diagonal value") {
    const auto p = calculus::make_pair("burgers", "quadratic_half");
    CHECK(calculus::normalized_flux(p, 1.0, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(calculus::normalized_flux(p, -1.0, 2.0) == doctest::Approx(0.0).epsilon(1e-14));
    for (const auto& flux : calculus::flux_names())
        for (const auto& entropy : calculus::entropy_names()) {
            const auto q = calculus::make_pair(flux, entropy);
            for (double c : {-1.7, 0.0, 0.9})
                CHECK(calculus::normalized_flux(q, c, c) ==
                      doctest::Approx(q.flux_deriv(c)).epsilon(1e-13));
        }
}

TEST_CASE("normalized flux is continuous across the diagonal with order >= 1") {
    const auto p = calculus::make_pair("quartic", "quadratic_half");
    const double c = 0.6;
    double prev_err = 0.0;
    double order_sum = 0.0;
    int order_count = 0;
    for (int k = 2; k <= 7; ++k) {
        const double h = std::pow(10.0, -k);
        const double err = std::max(std::abs(calculus::normalized_flux(p, c + h, c) - p.flux_deriv(c)),
                                    std::abs(calculus::normalized_flux(p, c - h, c) - p.flux_deriv(c)));
        if (k > 2 && err > 1e-12) {
            order_sum += std::log10(prev_err / err);
            ++order_count;
        }
        prev_err = err;
    }
    REQUIRE(order_count >= 3);
    CHECK(order_sum / order_count >= 0.8);  // observed convergence order
}

TEST_CASE("factorization F = f * eta away from the diagonal") {
    std::mt19937_64 rng(29);
    for (const auto& flux : calculus::flux_names()) {
        const auto p = calculus::make_pair(flux, "quartic_entropy");
        for (int k = 0; k < 200; ++k) {
            const double c = uniform(rng, -2.0, 2.0);
            double u = uniform(rng, -2.0, 2.0);
            if (std::abs(u - c) < 1e-6 * (1.0 + std::abs(c))) u = c + 2e-6 * (1.0 + std::abs(c));
            const double F = calculus::rel_entropy_flux(p, u, c);
            const double f = calculus::normalized_flux(p, u, c);
            const double eta = calculus::rel_entropy(p, u, c);
            CHECK(std::abs(F - f * eta) <= 1e-9 * (1.0 + std::abs(F)));
        }
    }
}

TEST_CASE("quadratic domination of the relative entropy flux") {
    std::mt19937_64 rng(31);
    for (const auto& flux : calculus::flux_names())
        for (const auto& entropy : calculus::entropy_names()) {
            const auto p = calculus::make_pair(flux, entropy);
            const auto box = calculus::bounds_on_box(p, -2.5, 2.5);
            for (int k = 0; k < 200; ++k) {
                const double u = uniform(rng, -2.5, 2.5);
                const double c = uniform(rng, -2.5, 2.5);
                const double F = calculus::rel_entropy_flux(p, u, c);
                CHECK(std::abs(F) <=
                      0.5 * box.L_eta * box.sup_Aprime * (u - c) * (u - c) + 1e-12);
            }
        }
}

TEST_CASE("normalized flux gradient: closed form, finite differences, bounds") {
    const auto p = calculus::make_pair("burgers", "quadratic_half");
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const double u = uniform(rng, -2.0, 2.0);
        const double c = uniform(rng, -2.0, 2.0);
        const auto g = calculus::normalized_flux_grad(p, u, c);
        CHECK(g.df_dU == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
        CHECK(g.df_dC == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    }
}

TEST_CASE("gradient matches central finite differences of f") {
    std::mt19937_64 rng(101);
    for (const auto& flux : calculus::flux_names()) {
        const auto p = calculus::make_pair(flux, "quartic_entropy");
        for (int k = 0; k < 60; ++k) {
            const double c = uniform(rng, -2.0, 2.0);
            double u = uniform(rng, -2.0, 2.0);
            if (std::abs(u - c) < 5e-3) u = c + std::copysign(5e-3, u - c == 0 ? 1.0 : u - c);
            const auto g = calculus::normalized_flux_grad(p, u, c);
            const double h = 1e-5 * (1.0 + std::abs(u) + std::abs(c));
            const double fdU = (calculus::normalized_flux(p, u + h, c) -
                                calculus::normalized_flux(p, u - h, c)) /
                               (2.0 * h);
            const double fdC = (calculus::normalized_flux(p, u, c + h) -
                                calculus::normalized_flux(p, u, c - h)) /
                               (2.0 * h);
            CHECK(g.df_dU == doctest::Approx(fdU).epsilon(1e-5));
            CHECK(g.df_dC == doctest::Approx(fdC).epsilon(1e-5));
        }
    }
}

TEST_CASE("gradient at the exact diagonal matches one-sided differences") {
    const auto p = calculus::make_pair("quartic", "quadratic");
    const double c = 0.8;
    const auto g = calculus::normalized_flux_grad(p, c, c);
    // first-order expansion: df/dU -> (2/3) A''(C), df/dC -> (1/3) A''(C)
    CHECK(g.df_dU == doctest::Approx(2.0 / 3.0 * p.flux_second(c)).epsilon(1e-5));
    CHECK(g.df_dC == doctest::Approx(1.0 / 3.0 * p.flux_second(c)).epsilon(1e-5));
}

TEST_CASE("bounds_on_box: exact for Burgers, margin for the quartic flux") {
    const auto burgers = calculus::make_pair("burgers", "quadratic_half");
    const auto box = calculus::bounds_on_box(burgers, -2.0, 2.0);
    CHECK(box.eps_A == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(box.L_A == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(box.eps_eta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(box.L_eta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(box.eps_fC == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(box.L_fU == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(calculus::bounds_on_box(burgers, 1.0, 1.0), Error);

    const auto quartic = calculus::make_pair("quartic", "quadratic_half");
    const auto qbox = calculus::bounds_on_box(quartic, -1.0, 1.0);
    CHECK(qbox.eps_A == doctest::Approx(1.0).epsilon(0.015));
    CHECK(qbox.L_A == doctest::Approx(2.0).epsilon(0.015));
    CHECK(qbox.eps_A <= 1.0);  // safe lower bound
    CHECK(qbox.L_A >= 2.0);    // safe upper bound
}

TEST_CASE("pair validation flags inconsistent derivatives and non-convexity") {
    auto p = calculus::make_pair("burgers", "quadratic_half");
    CHECK_NOTHROW(calculus::validate_pair(p, -2.0, 2.0));
    p.flux_deriv = [](double u) { return 1.1 * u; };
    CHECK_THROWS_AS(calculus::validate_pair(p, -2.0, 2.0), Error);

    auto concave = custom_pair([](double u) { return -u * u; },
                               [](double u) { return -2.0 * u; },
                               [](double) { return -2.0; });
    CHECK_THROWS_AS(calculus::validate_pair(concave, -1.0, 1.0), Error);
}

TEST_CASE("monotone gap: sharpness and exact linear family") {
    // g = 2s, h = s: equality case of the bound
    calculus::SampledFn g{[](double s) { return 2.0 * s; }, [](double) { return 2.0; }};
    calculus::SampledFn h{[](double s) { return s; }, [](double) { return 1.0; }};
    auto r = calculus::monotone_gap(g, h);
    CHECK(r.gap == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(r.bound == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

    // g = 1 + a(s-1/2), h = b s with a = b = 1/2: gap = bound = 1/48
    calculus::SampledFn g2{[](double s) { return 1.0 + 0.5 * (s - 0.5); },
                           [](double) { return 0.5; }};
    calculus::SampledFn h2{[](double s) { return 0.5 * s; }, [](double) { return 0.5; }};
    r = calculus::monotone_gap(g2, h2);
    CHECK(r.gap == doctest::Approx(1.0 / 48.0).epsilon(1e-13));
    CHECK(r.bound == doctest::Approx(1.0 / 48.0).epsilon(1e-13));

    // g = 2s, h = s^3 + s: gap = 19/60 >= bound = 1/6
    calculus::SampledFn h3{[](double s) { return s * s * s + s; },
                           [](double s) { return 3.0 * s * s + 1.0; }};
    r = calculus::monotone_gap(g, h3);
    CHECK(r.gap == doctest::Approx(19.0 / 60.0).epsilon(1e-12));
    CHECK(r.gap >= r.bound);

    // precondition failures
    calculus::SampledFn flat{[](double) { return 1.0; }, [](double) { return 0.0; }};
    CHECK_THROWS_AS(calculus::monotone_gap(flat, h), Error);
    calculus::SampledFn not_mass_one{[](double s) { return 3.0 * s; }, [](double) { return 3.0; }};
    CHECK_THROWS_AS(calculus::monotone_gap(not_mass_one, h), Error);
}

TEST_CASE("unknown registry names are input errors") {
    CHECK_THROWS_AS(calculus::make_pair("cubic", "quadratic"), Error);
    CHECK_THROWS_AS(calculus::make_pair("burgers", "exp"), Error);
}
