#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "molnar/elliptic.hpp"
#include "molnar/errors.hpp"
#include "molnar/generator.hpp"
#include "molnar/matmean.hpp"
#include "molnar/quadrature.hpp"
#include "molnar/strip.hpp"
#include "molnar/validation.hpp"

namespace molnar {

namespace detail {

inline void require_off_cut(std::complex<double> z, const char* where) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error(std::string(where) + ": argument must be finite");
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw domain_error(std::string(where) + ": argument lies on the cut (-inf, 0]");
}

} // namespace detail

/// Classical representing functions of the arithmetic, harmonic and
/// geometric means.
inline double f_arithmetic(double x) { return 0.5 * (1.0 + x); }
inline double f_harmonic(double x) { return 2.0 * x / (1.0 + x); }
inline double f_geometric(double x) { return std::sqrt(x); }

enum class ExtremalSide { minimum, maximum };

/// The extremal representing functions of the type-c class, c = e^{p/2},
/// where m solves 4 pi K(m)/K'(m) = p:
///   f_min(x) = sqrt(x)/(sqrt(m)+1) (dn(K' log x / pi, m) + sqrt(m) cn(...)),
///   f_max(x) = x / f_min(x).
inline double f_extremal(const EllipticModulus& mod, double x, ExtremalSide side) {
    if (!(x > 0.0)) throw domain_error("f_extremal: argument must be positive");
    const double u = mod.big_k_prime() * std::log(x) / std::numbers::pi;
    const auto j = jacobi_sn_cn_dn(u, mod.m());
    const double sqm = std::sqrt(mod.m());
    const double comb = j.dn + sqm * j.cn;
    // (dn - sqm cn)(dn + sqm cn) = 1 - m > 0 and dn > 0, so comb > 0 always
    if (!(comb > 0.0))
        throw consistency_error("f_extremal: dn + sqrt(m) cn <= 0; elliptic kernel is broken");
    const double fmin = std::sqrt(x) * comb / (1.0 + sqm);
    return side == ExtremalSide::minimum ? fmin : x / fmin;
}

/// A representing function f of a symmetric Kubo-Ando mean. Immutable.
/// Kinds:
///   - from_generator:  f(z) = sqrt(z) e^{S(log z)} through a strip evaluator
///   - single_harmonic: f_n(x) = sqrt(x) exp{pi sin^2(pi n log x / (2 log c))
///                      / sinh(pi^2 n / log c)}, type c
///   - single_harmonic_alpha: same family indexed by the frequency alpha
///   - extremal_min / extremal_max: the elliptic extremals of a type class
///   - arithmetic / harmonic / geometric: the classical closed forms
/// Callable on (0, inf); eval at 0 returns the limit value. Complex
/// evaluation follows principal branches and rejects the cut (-inf, 0];
/// the extremal kinds are real-line only (their closed forms are built
/// from real-argument Jacobi functions).
class RepFun {
public:
    enum class Kind {
        from_generator,
        single_harmonic,
        single_harmonic_alpha,
        extremal_min,
        extremal_max,
        arithmetic,
        harmonic,
        geometric
    };

    static RepFun from_generator(StripFunction strip) {
        RepFun f(Kind::from_generator);
        f.type_c_ = std::exp(0.5 * strip.period());
        f.strip_ = std::move(strip);
        return f;
    }

    static RepFun single_harmonic(int n, double c) {
        if (n == 0) throw domain_error("RepFun::single_harmonic: index must be nonzero");
        if (!(c > 1.0)) throw domain_error("RepFun::single_harmonic: type must satisfy c > 1");
        RepFun f(Kind::single_harmonic);
        f.n_ = n;
        f.log_c_ = std::log(c);
        f.type_c_ = c;
        return f;
    }

    static RepFun single_harmonic_alpha(double alpha) {
        if (alpha == 0.0 || !std::isfinite(alpha))
            throw domain_error("RepFun::single_harmonic_alpha: frequency must be nonzero");
        RepFun f(Kind::single_harmonic_alpha);
        f.alpha_ = alpha;
        // period p = pi/|alpha|, type c = e^{p/2}
        f.type_c_ = std::exp(0.5 * std::numbers::pi / std::abs(alpha));
        return f;
    }

    static RepFun extremal_min(EllipticModulus mod) {
        RepFun f(Kind::extremal_min);
        f.type_c_ = std::exp(0.5 * mod.period());
        f.modulus_ = mod;
        return f;
    }

    static RepFun extremal_max(EllipticModulus mod) {
        RepFun f(Kind::extremal_max);
        f.type_c_ = std::exp(0.5 * mod.period());
        f.modulus_ = mod;
        return f;
    }

    static RepFun arithmetic() { return RepFun(Kind::arithmetic); }
    static RepFun harmonic() { return RepFun(Kind::harmonic); }
    static RepFun geometric() { return RepFun(Kind::geometric); }

    Kind kind() const { return kind_; }

    /// The type scalar c > 1 when this function belongs to a single type
    /// class. Empty for arithmetic/harmonic (not of any type) and for the
    /// geometric function (of every type).
    std::optional<double> type_c() const { return type_c_; }

    const std::optional<StripFunction>& strip() const { return strip_; }
    const std::optional<EllipticModulus>& modulus() const { return modulus_; }

    double eval(double x) const {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw domain_error("RepFun::eval: argument must be in [0, inf)");
        if (x == 0.0) return limit_at_zero();
        switch (kind_) {
            case Kind::arithmetic: return f_arithmetic(x);
            case Kind::harmonic: return f_harmonic(x);
            case Kind::geometric: return f_geometric(x);
            case Kind::extremal_min: return f_extremal(*modulus_, x, ExtremalSide::minimum);
            case Kind::extremal_max: return f_extremal(*modulus_, x, ExtremalSide::maximum);
            case Kind::single_harmonic: {
                const double q = std::numbers::pi * n_ / log_c_;
                const double expo = 0.5 * std::numbers::pi *
                                    detail::one_minus_cos_over_sinh_pi(q, std::log(x));
                return std::sqrt(x) * std::exp(expo);
            }
            case Kind::single_harmonic_alpha: {
                const double expo = 0.5 * std::numbers::pi *
                                    detail::one_minus_cos_over_sinh_pi(2.0 * alpha_, std::log(x));
                return std::sqrt(x) * std::exp(expo);
            }
            case Kind::from_generator: {
                const std::complex<double> s = (*strip_)(std::complex<double>(std::log(x), 0.0));
                return std::sqrt(x) * std::exp(s.real());
            }
        }
        throw consistency_error("RepFun::eval: unhandled kind");
    }

    std::complex<double> eval(std::complex<double> z) const {
        detail::require_off_cut(z, "RepFun::eval");
        if (z.imag() == 0.0) return eval(z.real());
        switch (kind_) {
            case Kind::arithmetic: return 0.5 * (1.0 + z);
            case Kind::harmonic: return 2.0 * z / (1.0 + z);
            case Kind::geometric: return std::sqrt(z);
            case Kind::extremal_min:
            case Kind::extremal_max:
                throw domain_error("RepFun::eval: extremal kinds are real-line evaluators");
            case Kind::single_harmonic: {
                const double q = std::numbers::pi * n_ / log_c_;
                const std::complex<double> expo =
                    0.5 * std::numbers::pi * detail::one_minus_cos_over_sinh_pi(q, std::log(z));
                return std::sqrt(z) * std::exp(expo);
            }
            case Kind::single_harmonic_alpha: {
                const std::complex<double> expo =
                    0.5 * std::numbers::pi *
                    detail::one_minus_cos_over_sinh_pi(2.0 * alpha_, std::log(z));
                return std::sqrt(z) * std::exp(expo);
            }
            case Kind::from_generator:
                return std::sqrt(z) * std::exp((*strip_)(std::log(z)));
        }
        throw consistency_error("RepFun::eval: unhandled kind");
    }

    double operator()(double x) const { return eval(x); }

    std::string describe() const {
        switch (kind_) {
            case Kind::arithmetic: return "arithmetic";
            case Kind::harmonic: return "harmonic";
            case Kind::geometric: return "geometric";
            case Kind::extremal_min: return "f_min(p=" + std::to_string(modulus_->period()) + ")";
            case Kind::extremal_max: return "f_max(p=" + std::to_string(modulus_->period()) + ")";
            case Kind::single_harmonic:
                return "f_" + std::to_string(n_) + "(log c=" + std::to_string(log_c_) + ")";
            case Kind::single_harmonic_alpha:
                return "f_alpha(" + std::to_string(alpha_) + ")";
            case Kind::from_generator:
                return "generator-induced (p=" + std::to_string(strip_->period()) + ")";
        }
        return "?";
    }

private:
    explicit RepFun(Kind kind) : kind_(kind) {}

    double limit_at_zero() const {
        // every type-class member has f(0+) = 0; the arithmetic function
        // is the lone nonzero limit here
        return kind_ == Kind::arithmetic ? 0.5 : 0.0;
    }

    Kind kind_;
    std::optional<StripFunction> strip_;
    std::optional<EllipticModulus> modulus_;
    std::optional<double> type_c_;
    int n_ = 0;
    double log_c_ = 0.0;
    double alpha_ = 0.0;
};

/// Independent route to f avoiding the strip function entirely:
///   f(z) = sqrt(z) exp{(z-1) \int_R Psi(l) / ((1+e^l)(1+e^{-l} z)) dl}.
inline std::complex<double> f_integral_eval(const GeneratorSpec& gen, std::complex<double> z,
                                            double tol = 1e-10) {
    detail::require_off_cut(z, "f_integral_eval");
    if (gen.form() == GeneratorSpec::Form::zero) return std::sqrt(z);
    {
        const auto report = validate(gen);
        if (!report.ok())
            throw domain_error("f_integral_eval: generator rejected (" +
                               report.violations.front().constraint + ")");
    }

    const double abs_z = std::abs(z);
    const double log_abs_z = std::log(abs_z);
    const double half_len =
        std::abs(log_abs_z) + std::log(4.0 / tol) + std::log1p(abs_z) + 2.0;

    std::vector<double> points{-half_len, half_len};
    for (double x : gen.breakpoints_in(-half_len, half_len)) points.push_back(x);
    // near the cut the denominator 1 + e^{-l} z pinches at l = log|z|
    const double gap = std::numbers::pi - std::abs(std::arg(z));
    if (gap < 1.5) {
        points.push_back(log_abs_z);
        for (double step = std::max(gap, 1e-6); step < 2.0; step *= 2.0) {
            points.push_back(log_abs_z - step);
            points.push_back(log_abs_z + step);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::erase_if(points, [&](double x) { return x < -half_len || x > half_len; });

    double max_panel = 2.0;
    if (gen.form() == GeneratorSpec::Form::fourier && !gen.coefficients().empty())
        max_panel = std::clamp(
            gen.period() / (4.0 * static_cast<double>(gen.coefficients().size())), 0.05, 2.0);

    const auto integrand = [&](double l) -> std::complex<double> {
        return gen.eval(l) / ((1.0 + std::exp(l)) * (1.0 + std::exp(-l) * z));
    };
    const double prefactor = std::abs(z - 1.0);
    const double inner_tol = tol / std::max(1.0, prefactor);
    const std::complex<double> integral =
        integrate_segmented(integrand, points, inner_tol, max_panel);
    return std::sqrt(z) * std::exp((z - 1.0) * integral);
}

/// Checks the type-class membership conditions of f on a positive grid:
/// normalization f(1) = 1, functional symmetry x f(1/x) = f(x), the scaling
/// law f(c^2 x) = c f(x), and (as a sampled necessary condition for
/// operator monotonicity) the Loewner order on random 2x2 pairs.
inline ValidationReport molnar_validate(const RepFun& f, double c,
                                        const std::vector<double>& grid) {
    if (!(c > 0.0) || c == 1.0)
        throw domain_error("molnar_validate: type scalar must be positive and != 1");
    if (grid.empty()) throw domain_error("molnar_validate: grid must be nonempty");
    ValidationReport report;

    const double f1 = f.eval(1.0);
    if (!(std::abs(f1 - 1.0) <= 1e-12))
        report.violations.push_back({"normalized_at_one", 1.0,
                                     "f(1) = " + std::to_string(f1)});

    const double c2 = c * c;
    for (double x : grid) {
        const double fx = f.eval(x);
        if (!(fx > 0.0)) {
            report.violations.push_back({"positive_on_positive_axis", x,
                                         "f(x) = " + std::to_string(fx)});
            continue;
        }
        const double sym = x * f.eval(1.0 / x);
        if (!(std::abs(sym - fx) <= 1e-10 * std::max(1.0, fx)))
            report.violations.push_back({"functional_symmetry", x,
                                         "x f(1/x) - f(x) = " + std::to_string(sym - fx)});
        const double scaled = f.eval(c2 * x);
        if (!(std::abs(scaled - c * fx) <= 1e-10 * std::max(1.0, c * fx)))
            report.violations.push_back({"type_scaling", x,
                                         "f(c^2 x)/(c f(x)) - 1 = " +
                                             std::to_string(scaled / (c * fx) - 1.0)});
    }

    // sampled necessary condition for operator monotonicity on 2x2 pairs
    std::mt19937_64 rng(0x6d6f6c6e61723234ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto random_psd = [&](double ridge) {
        Eigen::MatrixXcd g(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
        return Eigen::MatrixXcd(g * g.adjoint() + ridge * Eigen::MatrixXcd::Identity(2, 2));
    };
    for (int trial = 0; trial < 64; ++trial) {
        const PosDefMatrix a(random_psd(1e-3));
        const PosDefMatrix bigger(a.entries() + random_psd(0.0));
        const double scale = a.norm() + bigger.norm();
        const double floor =
            min_eigenvalue(mat_apply(f, bigger).entries() - mat_apply(f, a).entries());
        if (floor < -1e-9 * scale) {
            report.violations.push_back({"operator_monotone_sample", static_cast<double>(trial),
                                         "min eig of f(B)-f(A) = " + std::to_string(floor)});
            break;
        }
    }
    return report;
}

} // namespace molnar
