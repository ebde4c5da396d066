#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "molnar/elliptic.hpp"
#include "molnar/errors.hpp"
#include "molnar/strip.hpp"

namespace molnar {

/// Truncation control for the bilateral kernel series. Terms decay like
/// e^{-p|n|}, so truncation_n is chosen to push the first omitted term
/// below tolerance for arguments with |log z| up to log_z_window.
struct EllipticKernelParams {
    double period;
    int truncation_n;
    double tolerance;

    static EllipticKernelParams for_period(double period, double tolerance = 1e-12,
                                           double log_z_window = 10.0) {
        if (!(period > 0.0))
            throw domain_error("EllipticKernelParams: period must be positive");
        if (!(tolerance > 0.0))
            throw domain_error("EllipticKernelParams: tolerance must be positive");
        // |term_n| <= 8 (|z|+1)^2 max(1, 1/|z|) e^{-|l + p n|} once the
        // shifted exponential dominates both z and 1/z; solve for n.
        const double budget =
            std::log(8.0 / tolerance) + 2.0 * std::log1p(std::exp(log_z_window)) +
            log_z_window + 0.5 * period;
        const int n = static_cast<int>(std::ceil(budget / period)) + 1;
        return {period, std::max(2, n), tolerance};
    }
};

/// The kernel E_p(lambda; z): odd and p-periodic in lambda, summed as the
/// bilateral series
///   sum_n (z-1)^2 (t-1) / ((t+1)(z+t)(z+1/t)),  t = e^{lambda + p n}.
/// lambda is reduced modulo p first; the truncation index grows beyond
/// params.truncation_n if the argument needs it.
inline std::complex<double> ep_series(const EllipticKernelParams& params, double lambda,
                                      std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw domain_error("ep_series: z must avoid the cut (-inf, 0]");
    const double p = params.period;
    const double lr = lambda - p * std::round(lambda / p);

    const std::complex<double> num_z = (z - 1.0) * (z - 1.0);
    if (num_z == std::complex<double>{}) return {};

    const double abs_z = std::abs(z);
    const double log_scale = std::abs(std::log(abs_z));
    const double budget = std::log(8.0 / params.tolerance) + 2.0 * std::log1p(abs_z) +
                          std::abs(std::log(std::min(abs_z, 1.0))) + 0.5 * p;
    const int n_needed = static_cast<int>(std::ceil((budget + log_scale) / p)) + 1;
    const int big_n = std::min(std::max(params.truncation_n, n_needed), 4000);

    std::complex<double> sum{};
    for (int n = -big_n; n <= big_n; ++n) {
        const double g = lr + p * static_cast<double>(n);
        const double t = std::exp(g);
        const double tinv = std::exp(-g);
        const std::complex<double> d1 = z + t;
        const std::complex<double> d2 = z + tinv;
        // poles sit on the negative axis at z = -e^{+-g}; complex z can
        // approach them from off the cut
        if (std::abs(d1) < 1e-8 * std::max(abs_z, t) ||
            std::abs(d2) < 1e-8 * std::max(abs_z, tinv))
            throw precision_loss_error("ep_series: z within 1e-8 of a kernel pole");
        sum += num_z * (t - 1.0) / ((t + 1.0) * d1 * d2);
    }
    return sum;
}

inline double ep_series(const EllipticKernelParams& params, double lambda, double x) {
    return ep_series(params, lambda, std::complex<double>(x, 0.0)).real();
}

/// Closed form of the kernel at the special point z = c = e^{p/2}:
///   E_p(lambda; c) = (2 sqrt(m) K'(m) / pi) sn(K'(m) lambda / pi, m),
/// with m solving 4 pi K(m)/K'(m) = p.
inline double ep_jacobi(const EllipticModulus& mod, double lambda) {
    const double kp = mod.big_k_prime();
    const auto j = jacobi_sn_cn_dn(kp * lambda / std::numbers::pi, mod.m());
    return 2.0 * std::sqrt(mod.m()) * kp / std::numbers::pi * j.sn;
}

/// Fourier sine coefficients of lambda -> E_p(lambda; e^w):
///   int_0^{p/2} E_p(lambda; e^w) sin(2 pi n lambda / p) dlambda
///     = 2 pi sin^2(pi n w / p) / sinh(2 pi^2 n / p),
/// evaluated in the same overflow-free form as the strip series.
inline std::complex<double> ep_fourier_coefficient(double p, int n, std::complex<double> w) {
    if (!(p > 0.0)) throw domain_error("ep_fourier_coefficient: period must be positive");
    if (n <= 0) throw domain_error("ep_fourier_coefficient: harmonic index must be positive");
    detail::require_in_strip(w, "ep_fourier_coefficient");
    const double q = 2.0 * std::numbers::pi * static_cast<double>(n) / p;
    return std::numbers::pi * detail::one_minus_cos_over_sinh_pi(q, w);
}

} // namespace molnar
