#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "molnar/elliptic_kernel.hpp"
#include "molnar/quadrature.hpp"

using namespace molnar;
using cplx = std::complex<double>;

namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("kernel series vanishes where it must", "[kernel]") {
    const double p = 20.0;
    const auto params = EllipticKernelParams::for_period(p, 1e-12);
    // simple zeros of the lambda-map at 0 and p/2, and the (z-1)^2 zero
    CHECK(std::abs(ep_series(params, 0.0, 2.0)) <= 1e-12);
    CHECK(std::abs(ep_series(params, p / 2.0, 2.0)) <= 1e-12);
    CHECK(ep_series(params, 1.0, 1.0) == 0.0);
    // identically zero at z = e^{p k}
    for (double lam : {0.7, 3.0, 8.2})
        CHECK(std::abs(ep_series(params, lam, std::exp(p))) <= 1e-12);
}

TEST_CASE("kernel series is odd and periodic in lambda", "[kernel][property]") {
    const double p = 6.0;
    const auto params = EllipticKernelParams::for_period(p, 1e-12);
    for (double lam : {0.3, 1.1, 2.4}) {
        for (double x : {0.2, 3.0, 40.0}) {
            CAPTURE(lam, x);
            REQUIRE(ep_series(params, -lam, x) == Approx(-ep_series(params, lam, x)).margin(1e-13));
            REQUIRE(ep_series(params, lam + p, x) ==
                    Approx(ep_series(params, lam, x)).margin(1e-13));
        }
    }
}

TEST_CASE("kernel positivity on the half period", "[kernel][property]") {
    const double p = 20.0;
    const auto params = EllipticKernelParams::for_period(p, 1e-12);
    for (double x : {0.3, 2.0, 10.0, 500.0, std::exp(10.0)}) {
        for (int i = 1; i < 40; ++i) {
            const double lam = p / 2.0 * i / 40.0;
            CAPTURE(x, lam);
            REQUIRE(ep_series(params, lam, x) > -1e-10);
        }
    }
}

TEST_CASE("kernel series against the Jacobi closed form at z = c", "[kernel]") {
    const double p = 20.0;
    const auto params = EllipticKernelParams::for_period(p, 1e-12);
    const auto mod = solve_modulus_for_period(p);
    const double c = std::exp(p / 2.0);
    for (double lam = 0.1; lam < p / 2.0 - 0.05; lam += 0.37) {
        CAPTURE(lam);
        REQUIRE(std::abs(ep_series(params, lam, c) - ep_jacobi(mod, lam)) <= 1e-8);
    }
    // frozen regression value at lambda = 3
    CHECK(ep_jacobi(mod, 3.0) == Approx(0.903330754494425).epsilon(1e-12));
    // zeros of sn at 0 and 2K (= lambda of p/2)
    CHECK(ep_jacobi(mod, 0.0) == 0.0);
    CHECK(std::abs(ep_jacobi(mod, p / 2.0)) <= 1e-10);
}

TEST_CASE("kernel Fourier coefficient closed form", "[kernel]") {
    CHECK(std::abs(ep_fourier_coefficient(20.0, 1, cplx{})) == 0.0);
    // w = p on the real axis: 1 - cos(2 pi n) = 0
    CHECK(std::abs(ep_fourier_coefficient(7.0, 3, cplx(7.0, 0.0))) <= 1e-18);
    // n = 1, p = 2 pi, w = pi: 2 pi sin^2(pi/2) / sinh(pi)
    const cplx v = ep_fourier_coefficient(2.0 * pi, 1, cplx(pi, 0.0));
    CHECK(v.real() == Approx(2.0 * pi / std::sinh(pi)).epsilon(1e-14));
    CHECK(v.imag() == Approx(0.0).margin(1e-16));

    CHECK_THROWS_AS(ep_fourier_coefficient(20.0, 0, cplx(1.0, 0.0)), domain_error);
    CHECK_THROWS_AS(ep_fourier_coefficient(-2.0, 1, cplx(1.0, 0.0)), domain_error);
    CHECK_THROWS_AS(ep_fourier_coefficient(20.0, 1, cplx(0.0, pi)), domain_error);
}

TEST_CASE("kernel Fourier coefficients match half-period quadrature", "[kernel]") {
    const double p = 20.0;
    const auto params = EllipticKernelParams::for_period(p, 1e-12);
    for (int n : {1, 2, 3}) {
        for (const cplx w : {cplx(1.0, 0.0), cplx(2.0, 1.5), cplx(-4.0, -0.8)}) {
            CAPTURE(n, w.real(), w.imag());
            const cplx lhs = adaptive_simpson_seeded(
                [&](double lam) {
                    return ep_series(params, lam, std::exp(w)) * std::sin(2.0 * pi * n * lam / p);
                },
                0.0, p / 2.0, 1e-9, p / (4.0 * n));
            REQUIRE(std::abs(lhs - ep_fourier_coefficient(p, n, w)) <= 1e-6);
        }
    }
}

TEST_CASE("kernel series guards", "[kernel]") {
    const auto params = EllipticKernelParams::for_period(6.0, 1e-12);
    CHECK_THROWS_AS(ep_series(params, 1.0, cplx(-2.0, 0.0)), domain_error);
    CHECK_THROWS_AS(ep_series(params, 1.0, cplx{}), domain_error);
    // just off the cut next to a pole of the lambda-series
    CHECK_THROWS_AS(ep_series(params, 0.5, cplx(-std::exp(0.5), 1e-12)),
                    precision_loss_error);
}
