#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "molnar/generator.hpp"
#include "molnar/quadrature.hpp"

using namespace molnar;

namespace {
const double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("validation accepts and rejects the right specs", "[generator]") {
    CHECK(validate(GeneratorSpec::zero(5.0)).ok());
    // single harmonic at the bound: sup = |B_1| = 1/2 exactly
    CHECK(validate(GeneratorSpec::fourier(two_pi, {0.5})).ok());
    CHECK(validate(GeneratorSpec::square_wave(20.0, 0.5)).ok());
    CHECK(validate(GeneratorSpec::square_wave(20.0, -0.5)).ok());

    const auto bad = validate(GeneratorSpec::fourier(two_pi, {0.6}));
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.violations.front().constraint == "sup_norm_bound");
    // single-harmonic sup is attained at a quarter period
    CHECK(std::abs(bad.violations.front().witness - two_pi / 4.0) < 0.01 * two_pi);

    CHECK_FALSE(validate(GeneratorSpec::square_wave(3.0, 0.51)).ok());
    CHECK_FALSE(validate(GeneratorSpec::fourier(two_pi, std::vector<double>(65, 0.001))).ok());
    // mixed harmonics where sum |B_n| > 1/2 but the sup stays below it
    CHECK(validate(GeneratorSpec::fourier(two_pi, {0.4, 0.0, 0.13})).ok());
}

TEST_CASE("construction rejects nonpositive periods", "[generator]") {
    CHECK_THROWS_AS(GeneratorSpec::zero(0.0), domain_error);
    CHECK_THROWS_AS(GeneratorSpec::fourier(-1.0, {0.1}), domain_error);
}

TEST_CASE("pointwise evaluation", "[generator]") {
    const auto zero = GeneratorSpec::zero(3.0);
    CHECK(zero.eval(0.7) == 0.0);
    CHECK(zero.eval(-12.3) == 0.0);

    const auto single = GeneratorSpec::fourier(two_pi, {0.5});
    CHECK(single.eval(std::numbers::pi / 2.0) == Approx(0.5).margin(1e-15));

    const auto sq = GeneratorSpec::square_wave(20.0, 0.5);
    CHECK(sq.eval(5.0) == 0.5);
    CHECK(sq.eval(-5.0) == -0.5);
    CHECK(sq.eval(15.0) == -0.5); // (p/2, p) maps to the negative half
    CHECK(sq.eval(0.0) == 0.0);   // midpoint convention at the jumps
    CHECK(sq.eval(10.0) == 0.0);
    CHECK(sq.eval(-10.0) == 0.0);
    CHECK(sq.eval(30.0) == 0.0);
}

TEST_CASE("multiplicative evaluation", "[generator]") {
    const auto sq = GeneratorSpec::square_wave(2.0, 0.5);
    CHECK(sq.eval_multiplicative(1.0) == 0.0);
    CHECK(sq.eval_multiplicative(std::exp(0.5)) == 0.5);
    CHECK_THROWS_AS(sq.eval_multiplicative(0.0), domain_error);
    CHECK_THROWS_AS(sq.eval_multiplicative(-2.0), domain_error);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ut(-6.0, 6.0);
    const auto fourier = GeneratorSpec::fourier(4.0, {0.3, 0.1});
    for (int i = 0; i < 500; ++i) {
        const double t = std::exp(ut(rng));
        CAPTURE(t);
        REQUIRE(std::abs(fourier.eval_multiplicative(t) +
                         fourier.eval_multiplicative(1.0 / t)) <= 1e-13);
        REQUIRE(std::abs(sq.eval_multiplicative(t) + sq.eval_multiplicative(1.0 / t)) <= 1e-13);
    }
}

TEST_CASE("oddness, periodicity, zero mean, boundedness", "[generator][property]") {
    const std::vector<GeneratorSpec> specs = {
        GeneratorSpec::fourier(two_pi, {0.5}),
        GeneratorSpec::fourier(4.0, {0.3, 0.1, -0.05}),
        GeneratorSpec::square_wave(20.0, 0.5),
        GeneratorSpec::square_wave(3.0, -0.25),
        GeneratorSpec::zero(7.0),
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ul(-50.0, 50.0);

    for (const auto& spec : specs) {
        REQUIRE(validate(spec).ok());
        const double p = spec.period();

        for (int i = 0; i < 1000; ++i) {
            const double lambda = ul(rng);
            REQUIRE(std::abs(spec.eval(-lambda) + spec.eval(lambda)) <= 1e-15);
        }
        for (int i = 0; i < 200; ++i) {
            const double lambda = ul(rng);
            REQUIRE(std::abs(spec.eval(lambda + p) - spec.eval(lambda)) <= 1e-13);
        }

        // zero mean over one period (split at the jumps for the square wave)
        std::vector<double> pts{0.0, p};
        for (double b : spec.breakpoints_in(0.0, p)) pts.insert(pts.end() - 1, b);
        const double mean =
            integrate_segmented([&](double l) { return spec.eval(l); }, pts, 1e-12, 1.0) / p;
        REQUIRE(std::abs(mean) <= 1e-10);

        double sup = 0.0;
        for (int i = 0; i < 4096; ++i)
            sup = std::max(sup, std::abs(spec.eval(p * (i + 0.5) / 4096)));
        REQUIRE(sup <= 0.5 + 1e-12);
    }
}
