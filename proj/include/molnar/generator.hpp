#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "molnar/errors.hpp"
#include "molnar/validation.hpp"

namespace molnar {

/// The generator of a strip function: a real, odd, p-periodic function
/// bounded by 1/2 in absolute value. Supported closed forms:
///   - fourier:     Psi(lambda) = sum_n B_n sin(2 pi n lambda / p)
///   - square_wave: +s on (0, p/2), -s on (-p/2, 0), 0 at the jumps
///   - zero:        identically 0
/// Oddness and p-periodicity hold exactly by construction; the |Psi| <= 1/2
/// bound is checked by validate().
class GeneratorSpec {
public:
    enum class Form { fourier, square_wave, zero };

    /// Fourier sine series can alias past this many harmonics on the
    /// validation grid, and their strip-series terms are below machine
    /// epsilon anyway.
    static constexpr std::size_t max_harmonics = 64;

    static GeneratorSpec fourier(double period, std::vector<double> coefficients) {
        GeneratorSpec g(Form::fourier, period);
        g.coefficients_ = std::move(coefficients);
        return g;
    }

    static GeneratorSpec square_wave(double period, double amplitude) {
        GeneratorSpec g(Form::square_wave, period);
        g.amplitude_ = amplitude;
        return g;
    }

    static GeneratorSpec zero(double period) { return GeneratorSpec(Form::zero, period); }

    Form form() const { return form_; }
    double period() const { return period_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    double amplitude() const { return amplitude_; }

    /// Psi(lambda). The argument is reduced modulo the period first, so
    /// periodicity and oddness are structural rather than numerical.
    double eval(double lambda) const {
        const double r = reduce(lambda);
        switch (form_) {
            case Form::zero:
                return 0.0;
            case Form::square_wave: {
                const double half = 0.5 * period_;
                if (r == 0.0 || r == half || r == -half) return 0.0; // midpoint at jumps
                return r > 0.0 ? amplitude_ : -amplitude_;
            }
            case Form::fourier: {
                const double a = 2.0 * std::numbers::pi / period_;
                double sum = 0.0;
                for (std::size_t n = 0; n < coefficients_.size(); ++n)
                    sum += coefficients_[n] * std::sin(a * static_cast<double>(n + 1) * r);
                return sum;
            }
        }
        return 0.0;
    }

    /// psi(t) = Psi(log t) for t > 0; satisfies psi(1/t) = -psi(t).
    double eval_multiplicative(double t) const {
        if (!(t > 0.0))
            throw domain_error("GeneratorSpec::eval_multiplicative: argument must be positive");
        return eval(std::log(t));
    }

    /// Points in [a, b] where Psi is discontinuous (for quadrature
    /// splitting). Empty except for the square wave, which jumps at every
    /// multiple of p/2.
    std::vector<double> breakpoints_in(double a, double b) const {
        std::vector<double> pts;
        if (form_ != Form::square_wave || !(b > a)) return pts;
        const double half = 0.5 * period_;
        const double k0 = std::ceil(a / half);
        for (double k = k0; k * half < b; k += 1.0) {
            const double x = k * half;
            if (x > a && x < b) pts.push_back(x);
        }
        return pts;
    }

private:
    GeneratorSpec(Form form, double period) : form_(form), period_(period) {
        if (!(period > 0.0) || !std::isfinite(period))
            throw domain_error("GeneratorSpec: period must be positive and finite");
    }

    double reduce(double lambda) const {
        return lambda - period_ * std::round(lambda / period_);
    }

    Form form_;
    double period_;
    std::vector<double> coefficients_;
    double amplitude_ = 0.0;
};

/// Checks the |Psi| <= 1/2 bound and the structural limits. For Fourier
/// forms the exact coefficient bound sum |B_n| <= 1/2 is tried first; if it
/// is inconclusive the sup is estimated on a 4096-point grid per period
/// (dense enough that no admissible harmonic can alias).
inline ValidationReport validate(const GeneratorSpec& spec) {
    ValidationReport report;
    switch (spec.form()) {
        case GeneratorSpec::Form::zero:
            break;
        case GeneratorSpec::Form::square_wave:
            if (!(std::abs(spec.amplitude()) <= 0.5) || !std::isfinite(spec.amplitude()))
                report.violations.push_back({"square_wave_amplitude", spec.amplitude(),
                                             "|amplitude| must be <= 1/2"});
            break;
        case GeneratorSpec::Form::fourier: {
            const auto& b = spec.coefficients();
            if (b.size() > GeneratorSpec::max_harmonics) {
                report.violations.push_back({"fourier_harmonic_cap",
                                             static_cast<double>(b.size()),
                                             "at most 64 harmonics are supported"});
                break;
            }
            double abs_sum = 0.0;
            bool finite = true;
            for (double coeff : b) {
                if (!std::isfinite(coeff)) finite = false;
                abs_sum += std::abs(coeff);
            }
            if (!finite) {
                report.violations.push_back({"fourier_coefficients_finite", 0.0,
                                             "coefficients must be finite"});
                break;
            }
            if (abs_sum <= 0.5) break; // sufficient bound, no grid needed
            const int grid = 4096;
            double sup = 0.0;
            double witness = 0.0;
            for (int i = 0; i < grid; ++i) {
                const double lambda = spec.period() * (static_cast<double>(i) + 0.5) / grid;
                const double v = std::abs(spec.eval(lambda));
                if (v > sup) {
                    sup = v;
                    witness = lambda;
                }
            }
            if (sup > 0.5 + 1e-12)
                report.violations.push_back({"sup_norm_bound", witness,
                                             "grid sup |Psi| = " + std::to_string(sup) +
                                                 " exceeds 1/2"});
            break;
        }
    }
    return report;
}

} // namespace molnar
