#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "molnar/errors.hpp"

namespace molnar {

// Parameter convention used throughout: all elliptic routines take the
// PARAMETER m = k^2, not the modulus k, so K'(m) = K(1-m). Libraries
// disagree on this point; every call site in this project means m = k^2.

namespace detail {

/// AGM(1, b0); quadratically convergent.
inline double agm(double a, double b) {
    for (int i = 0; i < 64 && std::abs(a - b) > 0.5e-15 * (a + b); ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

/// K(1 - mc) computed from the complementary parameter mc, avoiding the
/// cancellation in forming 1 - m when m is close to 1. mc = 1 is admitted
/// (the m -> 0 limit K = pi/2) so that the period solver can work right up
/// against the rounding boundary of the complementary pair.
inline double elliptic_k_from_complement(double mc) {
    if (!(mc > 0.0) || !(mc <= 1.0))
        throw domain_error("elliptic_k: complementary parameter outside (0,1]");
    return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(mc)));
}

} // namespace detail

/// Complete elliptic integral of the first kind,
/// K(m) = \int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta), for m in (0,1).
inline double complete_elliptic_k(double m) {
    if (!(m > 0.0) || !(m < 1.0))
        throw domain_error("complete_elliptic_k: parameter m must lie in (0,1), got " +
                           std::to_string(m));
    return detail::elliptic_k_from_complement(1.0 - m);
}

struct JacobiValues {
    double sn;
    double cn;
    double dn;
};

/// Jacobi elliptic functions sn, cn, dn of real argument u, parameter m
/// in (0,1). Descending Landen (AGM) scheme: the modulus chain is driven
/// below 1e-16, then the amplitude is recovered by the downward phi
/// recursion. The argument is first reduced modulo the fundamental real
/// period 4K(m).
inline JacobiValues jacobi_sn_cn_dn(double u, double m) {
    if (!(m > 0.0) || !(m < 1.0))
        throw domain_error("jacobi_sn_cn_dn: parameter m must lie in (0,1), got " +
                           std::to_string(m));
    if (!std::isfinite(u))
        throw domain_error("jacobi_sn_cn_dn: argument u must be finite");

    const double big_k = complete_elliptic_k(m);
    u = std::fmod(u, 4.0 * big_k);

    constexpr int max_steps = 32;
    double a[max_steps];
    double c[max_steps];
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int n = 0;
    while (n + 1 < max_steps && std::abs(c[n]) > 1e-16 * a[n]) {
        const double an = 0.5 * (a[n] + b);
        const double cn1 = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
        a[n] = an;
        c[n] = cn1;
    }

    double phi = std::ldexp(1.0, n) * a[n] * u;
    for (int i = n; i >= 1; --i) {
        const double s = std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }

    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    // dn^2 = 1 - m sn^2 = cn^2 + (1-m) sn^2; the right-hand form has no
    // cancellation and dn > 0 for all real u.
    const double dn = std::sqrt(cn * cn + (1.0 - m) * sn * sn);
    return {sn, cn, dn};
}

/// Elliptic parameter m with its cached quarter periods K(m) and
/// K'(m) = K(1-m). Immutable. Obtain one either directly from m or by
/// solving the period equation 4*pi*K(m)/K'(m) = p.
class EllipticModulus {
public:
    static EllipticModulus from_parameter(double m) {
        if (!(m > 0.0) || !(m < 1.0))
            throw domain_error("EllipticModulus: parameter m must lie in (0,1)");
        return EllipticModulus(m, 1.0 - m);
    }

    /// Solves 4*pi*K(m)/K'(m) = p for m. The ratio is strictly increasing
    /// in m, from 0 at m=0+ to +inf at m=1-. The search runs in logit
    /// coordinates t = log(m/(1-m)) so that both endpoints keep full
    /// relative precision: bisection to width 1e-8, then secant polish.
    static EllipticModulus for_period(double p) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw domain_error("EllipticModulus::for_period: period must be positive and finite");

        const auto ratio_minus_p = [p](double t) {
            const double m = 1.0 / (1.0 + std::exp(-t));
            const double mc = 1.0 / (1.0 + std::exp(t));
            if (!(m > 0.0)) return -p;      // t far below any admissible root
            if (!(mc > 0.0)) return 1e300;  // t far above
            const double big_k = detail::elliptic_k_from_complement(mc);
            const double big_k_prime = detail::elliptic_k_from_complement(m);
            return 4.0 * std::numbers::pi * big_k / big_k_prime - p;
        };

        double lo = -8.0;
        double hi = 8.0;
        while (ratio_minus_p(lo) > 0.0) lo *= 2.0;
        while (ratio_minus_p(hi) < 0.0) hi *= 2.0;

        while (hi - lo > 1e-8) {
            const double mid = 0.5 * (lo + hi);
            if (ratio_minus_p(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }

        // The bracket is now narrow enough that the ratio is linear to
        // machine precision; a couple of secant steps finish the job.
        double t0 = lo;
        double t1 = hi;
        double g0 = ratio_minus_p(t0);
        double g1 = ratio_minus_p(t1);
        for (int i = 0; i < 40 && t0 != t1; ++i) {
            if (g1 == g0) break;
            double t2 = t1 - g1 * (t1 - t0) / (g1 - g0);
            t2 = std::clamp(t2, lo, hi);
            const double g2 = ratio_minus_p(t2);
            t0 = t1;
            g0 = g1;
            t1 = t2;
            g1 = g2;
            if (std::abs(g1) <= 1e-14 * p) break;
        }
        if (std::abs(g1) > std::abs(g0)) t1 = t0;

        const double t = t1;
        const double m = 1.0 / (1.0 + std::exp(-t));
        const double mc = 1.0 / (1.0 + std::exp(t));
        if (mc < 1e-15)
            throw precision_loss_error(
                "EllipticModulus::for_period: 1-m below 1e-15 for period " + std::to_string(p) +
                "; the modulus is numerically indistinguishable from 1");
        return EllipticModulus(m, mc);
    }

    double m() const { return m_; }
    double big_k() const { return big_k_; }
    double big_k_prime() const { return big_k_prime_; }

    /// The period this modulus represents: p = 4*pi*K(m)/K'(m).
    double period() const { return 4.0 * std::numbers::pi * big_k_ / big_k_prime_; }

private:
    EllipticModulus(double m, double mc)
        : m_(m),
          big_k_(detail::elliptic_k_from_complement(mc)),
          big_k_prime_(detail::elliptic_k_from_complement(m)) {}

    double m_;
    double big_k_;
    double big_k_prime_;
};

inline EllipticModulus solve_modulus_for_period(double p) {
    return EllipticModulus::for_period(p);
}

} // namespace molnar
