#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "molnar/errors.hpp"
#include "molnar/generator.hpp"
#include "molnar/quadrature.hpp"

namespace molnar {

namespace detail {

/// (1 - cos(q w)) / sinh(q pi) for q != 0 and w in the strip |Im w| < pi,
/// in overflow-free form: with the numerator and denominator both scaled by
/// e^{-q pi}, every exponent has nonpositive real part.
inline std::complex<double> one_minus_cos_over_sinh_pi(double q, std::complex<double> w) {
    if (q < 0.0) return -one_minus_cos_over_sinh_pi(-q, w);
    const double qpi = q * std::numbers::pi;
    const std::complex<double> iqw(-q * w.imag(), q * w.real());
    const std::complex<double> num =
        2.0 * std::exp(-qpi) - std::exp(iqw - qpi) - std::exp(-iqw - qpi);
    const double den = -std::expm1(-2.0 * qpi);
    return num / den;
}

/// Real-argument specialization of the above: 2 e^{-q pi} (1 - cos(q l))
/// over (1 - e^{-2 q pi}).
inline double one_minus_cos_over_sinh_pi(double q, double lambda) {
    if (q < 0.0) return -one_minus_cos_over_sinh_pi(-q, lambda);
    const double qpi = q * std::numbers::pi;
    return 2.0 * std::exp(-qpi) * (1.0 - std::cos(q * lambda)) / (-std::expm1(-2.0 * qpi));
}

inline void require_in_strip(std::complex<double> w, const char* where) {
    if (!(std::abs(w.imag()) < std::numbers::pi))
        throw domain_error(std::string(where) + ": argument outside the strip |Im w| < pi");
}

} // namespace detail

/// S(w) for a Fourier-form generator by the term-by-term strip series
///   S(w) = pi * sum_n B_n (1 - cos(a n w)) / sinh(a n pi),  a = 2 pi / p.
/// The sum is exact over the generator's finitely many harmonics.
inline std::complex<double> s_fourier(const GeneratorSpec& gen, std::complex<double> w) {
    detail::require_in_strip(w, "s_fourier");
    if (gen.form() == GeneratorSpec::Form::zero) return {};
    if (gen.form() != GeneratorSpec::Form::fourier)
        throw domain_error("s_fourier: generator must be in Fourier (or zero) form");
    const double a = 2.0 * std::numbers::pi / gen.period();
    std::complex<double> sum{};
    const auto& b = gen.coefficients();
    for (std::size_t n = 0; n < b.size(); ++n) {
        if (b[n] == 0.0) continue;
        sum += b[n] * detail::one_minus_cos_over_sinh_pi(a * static_cast<double>(n + 1), w);
    }
    return std::numbers::pi * sum;
}

/// S(w) by adaptive quadrature of the integral representation
///   S(w) = (1/2) \int_R Psi(l) sinh(w/2) / (cosh(l/2) cosh((w-l)/2)) dl.
/// The integrand decays like e^{-|l|/2} e^{-|l - Re w|/2}; the domain is
/// truncated accordingly. As Im w -> pi the integrand develops a spike of
/// half-width ~ (pi - |Im w|)/2 at l = Re w, which is resolved by forced
/// split points; arguments with |Im w| > pi (1 - 1e-4) are rejected because
/// the spike is then too narrow to integrate reliably in doubles.
inline std::complex<double> s_quadrature(const GeneratorSpec& gen, std::complex<double> w,
                                         double tol = 1e-10) {
    detail::require_in_strip(w, "s_quadrature");
    constexpr double boundary_margin = 1e-4;
    if (std::abs(w.imag()) > std::numbers::pi * (1.0 - boundary_margin))
        throw precision_loss_error("s_quadrature: argument too close to the strip boundary");
    if (gen.form() == GeneratorSpec::Form::zero) return {};
    if (!(tol > 0.0)) throw domain_error("s_quadrature: tolerance must be positive");

    const std::complex<double> prefactor = 0.5 * std::sinh(0.5 * w);
    if (prefactor == std::complex<double>{}) return {}; // w = 0
    const double half_len = std::abs(w.real()) + 2.0 * std::log(4.0 / tol);

    std::vector<double> points{-half_len, half_len};
    for (double x : gen.breakpoints_in(-half_len, half_len)) points.push_back(x);
    // Spike ladder around l = Re w, geometric in the spike half-width.
    const double spike = 0.5 * (std::numbers::pi - std::abs(w.imag()));
    if (spike < 0.5) {
        points.push_back(w.real());
        for (double step = spike; step < 1.0; step *= 2.0) {
            points.push_back(w.real() - step);
            points.push_back(w.real() + step);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::erase_if(points, [&](double x) { return x < -half_len || x > half_len; });

    // Panel seeding keeps the highest Fourier harmonic from slipping
    // through the coarse first Simpson estimate.
    double max_panel = 2.0;
    if (gen.form() == GeneratorSpec::Form::fourier && !gen.coefficients().empty())
        max_panel = std::clamp(
            gen.period() / (4.0 * static_cast<double>(gen.coefficients().size())), 0.05, 2.0);

    const auto integrand = [&](double l) -> std::complex<double> {
        return gen.eval(l) / (std::cosh(0.5 * l) * std::cosh(0.5 * (w - l)));
    };
    const double inner_tol = tol / std::max(1.0, std::abs(prefactor));
    return prefactor * integrate_segmented(integrand, points, inner_tol, max_panel);
}

enum class StripMethod { fourier_series, quadrature };

/// Evaluator of the strip function S on D = {|Im w| < pi} induced by a
/// generator: even, p-periodic, S(0) = 0, |Im S(w)| <= Im(w)/2. Immutable
/// and safe to share across threads.
class StripFunction {
public:
    StripFunction(GeneratorSpec gen, StripMethod method, double tolerance = 1e-10)
        : gen_(std::move(gen)), method_(method), tolerance_(tolerance) {
        if (!(tolerance > 0.0))
            throw domain_error("StripFunction: tolerance must be positive");
        const auto report = validate(gen_);
        if (!report.ok())
            throw domain_error("StripFunction: generator rejected (" +
                               report.violations.front().constraint + ")");
        if (method == StripMethod::fourier_series &&
            gen_.form() == GeneratorSpec::Form::square_wave)
            throw domain_error(
                "StripFunction: the series evaluator needs a Fourier-form generator");
    }

    std::complex<double> operator()(std::complex<double> w) const {
        return method_ == StripMethod::fourier_series ? s_fourier(gen_, w)
                                                      : s_quadrature(gen_, w, tolerance_);
    }

    const GeneratorSpec& generator() const { return gen_; }
    StripMethod method() const { return method_; }
    double tolerance() const { return tolerance_; }
    double period() const { return gen_.period(); }

private:
    GeneratorSpec gen_;
    StripMethod method_;
    double tolerance_;
};

/// Recovers Psi(lambda) = (1/pi) lim_{mu->pi-} Im S(lambda + i mu).
///
/// For series evaluators the limit is taken termwise: the n-th term
/// contributes B_n sin(a n lambda) sinh(a n mu)/sinh(a n pi), and the sinh
/// ratio cancels to 1 at mu = pi. For quadrature evaluators the limit is
/// approximated at mu_k = pi - delta 2^{-k}, k = 0..4, delta = 1e-2, and
/// Richardson-extrapolated to the boundary.
inline double psi_recover(const StripFunction& sf, double lambda) {
    if (sf.method() == StripMethod::fourier_series) {
        const auto& gen = sf.generator();
        if (gen.form() == GeneratorSpec::Form::zero) return 0.0;
        const double a = 2.0 * std::numbers::pi / gen.period();
        double sum = 0.0;
        const auto& b = gen.coefficients();
        for (std::size_t n = 0; n < b.size(); ++n)
            sum += b[n] * std::sin(a * static_cast<double>(n + 1) * lambda);
        return sum;
    }

    constexpr int levels = 5;
    constexpr double delta = 1e-2;
    double eps[levels];
    double t[levels][levels];
    for (int k = 0; k < levels; ++k) {
        eps[k] = delta * std::ldexp(1.0, -k);
        const std::complex<double> w(lambda, std::numbers::pi - eps[k]);
        t[k][0] = sf(w).imag() / std::numbers::pi;
    }
    // Neville table evaluated at eps = 0; t[i][j] interpolates nodes i-j..i.
    for (int j = 1; j < levels; ++j)
        for (int i = j; i < levels; ++i)
            t[i][j] = (eps[i] * t[i - 1][j - 1] - eps[i - j] * t[i][j - 1]) /
                      (eps[i] - eps[i - j]);
    const double diag = t[levels - 1][levels - 1];
    const double prev_diag = t[levels - 2][levels - 2];
    if (std::abs(diag - prev_diag) > 1e-4)
        throw convergence_error("psi_recover: boundary extrapolation did not settle at lambda = " +
                                std::to_string(lambda));
    return diag;
}

} // namespace molnar
