#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "molnar/elliptic_kernel.hpp"
#include "molnar/matmean.hpp"
#include "molnar/rep_fun.hpp"

namespace molnar {

inline std::vector<double> log_spaced_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw domain_error("log_spaced_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return g;
}

struct SuiteConfig {
    int grid_count = 64;
    double grid_min = 1e-3;
    double grid_max = 1e3;
    std::vector<int> matrix_dims = {2, 3, 4, 5};
    int trials = 500;
    std::map<std::string, double> tolerances; ///< overrides keyed by check name
    std::uint64_t seed = 20250808;

    void require_valid() const {
        if (grid_count < 2 || !(grid_min > 0.0) || !(grid_max > grid_min) || trials < 1)
            throw domain_error("SuiteConfig: need grid_count >= 2, 0 < min < max, trials >= 1");
        for (const auto& [name, tol] : tolerances)
            if (!(tol > 0.0))
                throw domain_error("SuiteConfig: tolerance for '" + name + "' must be positive");
        for (int d : matrix_dims)
            if (d < 1) throw domain_error("SuiteConfig: matrix dims must be >= 1");
    }

    std::vector<double> grid() const { return log_spaced_grid(grid_min, grid_max, grid_count); }

    double tol(const std::string& name, double fallback) const {
        const auto it = tolerances.find(name);
        return it == tolerances.end() ? fallback : it->second;
    }
};

enum class CheckStatus { pass, fail, skip };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skip: return "skip";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    CheckStatus status;
    double worst_violation; ///< pass iff worst_violation <= tolerance
    double tolerance;
    std::string witness;
};

struct VerificationReport {
    std::string subject;
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;

    bool all_passed() const {
        for (const auto& c : checks)
            if (c.status == CheckStatus::fail) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["subject"] = subject;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["name"] = c.name;
            e["status"] = to_string(c.status);
            e["worst_violation"] = c.worst_violation;
            e["tolerance"] = c.tolerance;
            e["witness"] = c.witness;
            j["checks"].push_back(e);
        }
        j["seed"] = seed;
        j["elapsed_seconds"] = elapsed_seconds;
        return j;
    }

    void write_lines(std::ostream& os) const {
        for (const auto& c : checks) {
            os << (c.status == CheckStatus::pass ? "PASS" :
                   c.status == CheckStatus::fail ? "FAIL" : "SKIP")
               << "  " << c.name << "  worst=" << c.worst_violation << "  tol=" << c.tolerance;
            if (c.status == CheckStatus::fail && !c.witness.empty())
                os << "  witness: " << c.witness;
            os << "\n";
        }
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-trial seed, independent of evaluation order.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t salt, std::uint64_t trial) {
    return splitmix64(splitmix64(base ^ splitmix64(salt)) ^ trial);
}

inline std::uint64_t name_salt(const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ULL;
    return h;
}

/// Tracks the largest violation seen and the input that produced it.
struct Worst {
    double value = -std::numeric_limits<double>::infinity();
    std::string witness;
    void update(double v, const std::string& w) {
        if (v > value) {
            value = v;
            witness = w;
        }
    }
    double final_value() const { return std::isinf(value) ? 0.0 : value; }
};

inline Eigen::MatrixXcd random_gaussian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    return g;
}

inline PosDefMatrix random_spd(int n, std::mt19937_64& rng) {
    const Eigen::MatrixXcd g = random_gaussian(n, rng);
    return PosDefMatrix(g * g.adjoint() + 1e-3 * Eigen::MatrixXcd::Identity(n, n));
}

inline Eigen::MatrixXcd random_psd(int n, std::mt19937_64& rng) {
    const Eigen::MatrixXcd g = random_gaussian(n, rng);
    return g * g.adjoint();
}

/// Random singular positive semidefinite matrix (smallest eigenvalue
/// projected out) for the regularization check.
inline PosDefMatrix random_singular_psd(int n, std::mt19937_64& rng) {
    const PosDefMatrix a = random_spd(n, rng);
    Eigen::VectorXd evals = a.eigenvalues();
    evals(0) = 0.0;
    const Eigen::MatrixXcd m = a.eigenvectors() *
                               evals.cast<std::complex<double>>().asDiagonal() *
                               a.eigenvectors().adjoint();
    return PosDefMatrix(0.5 * (m + m.adjoint()), Definiteness::positive_semidefinite);
}

} // namespace detail

/// Scalar checks of type-class membership: normalization, functional
/// symmetry, the type-c scaling law, and its c <-> 1/c equivalent form.
/// Deterministic given (f, c, cfg).
inline VerificationReport run_function_suite(const RepFun& f, double c, const SuiteConfig& cfg) {
    cfg.require_valid();
    if (!(c > 1.0)) throw domain_error("run_function_suite: type scalar must exceed 1");
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport report;
    report.subject = "function suite: " + f.describe() + " (c=" + std::to_string(c) + ")";
    report.seed = cfg.seed;
    const auto grid = cfg.grid();

    const auto push = [&](const std::string& name, double fallback_tol,
                          const detail::Worst& w) {
        const double tol = cfg.tol(name, fallback_tol);
        report.checks.push_back({name,
                                 w.final_value() <= tol ? CheckStatus::pass : CheckStatus::fail,
                                 w.final_value(), tol, w.witness});
    };

    {
        detail::Worst w;
        w.update(std::abs(f.eval(1.0) - 1.0), "x=1");
        push("normalized_at_one", 1e-12, w);
    }
    {
        detail::Worst w;
        for (double x : grid) {
            const double fx = f.eval(x);
            w.update(std::abs(x * f.eval(1.0 / x) - fx) / std::max(1.0, fx),
                     "x=" + std::to_string(x));
        }
        push("functional_symmetry", 1e-10, w);
    }
    {
        detail::Worst w;
        for (double x : grid) {
            const double fx = f.eval(x);
            w.update(std::abs(f.eval(c * c * x) / (c * fx) - 1.0), "x=" + std::to_string(x));
        }
        push("type_scaling", 1e-10, w);
    }
    {
        // M_c = M_{1/c}: f(x/c^2) = f(x)/c
        detail::Worst w;
        for (double x : grid) {
            const double fx = f.eval(x);
            w.update(std::abs(c * f.eval(x / (c * c)) / fx - 1.0), "x=" + std::to_string(x));
        }
        push("reciprocal_type_scaling", 1e-10, w);
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// The Kubo-Ando axiom battery over random instances: normalization,
/// permutation symmetry, scalar consistency, joint monotonicity, the
/// transformer inequality, operator monotonicity of the scalar function,
/// the arithmetic-harmonic sandwich, and upper semicontinuity via the
/// regularization gap. Runs cfg.trials instances per dimension per check;
/// per-trial seeds are split deterministically so the report does not
/// depend on evaluation order.
inline VerificationReport run_mean_suite(const std::function<double(double)>& f,
                                         const std::string& subject, const SuiteConfig& cfg) {
    cfg.require_valid();
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport report;
    report.subject = "mean suite: " + subject;
    report.seed = cfg.seed;

    const auto push = [&](const std::string& name, double fallback_tol,
                          const detail::Worst& w) {
        const double tol = cfg.tol(name, fallback_tol);
        report.checks.push_back({name,
                                 w.final_value() <= tol ? CheckStatus::pass : CheckStatus::fail,
                                 w.final_value(), tol, w.witness});
    };
    const auto witness = [](int dim, int trial, double value) {
        return "dim=" + std::to_string(dim) + " trial=" + std::to_string(trial) +
               " value=" + std::to_string(value);
    };

    {
        detail::Worst w;
        for (int dim : cfg.matrix_dims) {
            const auto id = PosDefMatrix::identity(dim);
            const double v = (kubo_ando_mean(f, id, id).entries() - id.entries()).norm();
            w.update(v, "dim=" + std::to_string(dim));
        }
        push("normalization", 1e-12, w);
    }
    {
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("symmetry");
        for (int dim : cfg.matrix_dims)
            for (int trial = 0; trial < cfg.trials; ++trial) {
                std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt ^ dim, trial));
                const auto a = detail::random_spd(dim, rng);
                const auto b = detail::random_spd(dim, rng);
                const double v = (kubo_ando_mean(f, a, b).entries() -
                                  kubo_ando_mean(f, b, a).entries())
                                     .norm() /
                                 (a.norm() + b.norm());
                w.update(v, witness(dim, trial, v));
            }
        push("symmetry", 1e-10, w);
    }
    {
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("scalar_consistency");
        for (int trial = 0; trial < cfg.trials; ++trial) {
            std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt, trial));
            std::uniform_real_distribution<double> ux(0.05, 20.0);
            const double x = ux(rng);
            const double y = ux(rng);
            const double direct = x * f(y / x);
            const double mean = kubo_ando_mean(f, PosDefMatrix::diagonal({x}),
                                               PosDefMatrix::diagonal({y}))
                                    .entries()(0, 0)
                                    .real();
            w.update(std::abs(mean - direct) / std::max(1.0, std::abs(direct)),
                     "x=" + std::to_string(x) + " y=" + std::to_string(y));
        }
        push("scalar_consistency", 1e-12, w);
    }
    {
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("joint_monotonicity");
        for (int dim : cfg.matrix_dims)
            for (int trial = 0; trial < cfg.trials; ++trial) {
                std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt ^ dim, trial));
                const auto a = detail::random_spd(dim, rng);
                const auto b = detail::random_spd(dim, rng);
                const PosDefMatrix c(a.entries() + detail::random_psd(dim, rng));
                const PosDefMatrix d(b.entries() + detail::random_psd(dim, rng));
                const double scale = c.norm() + d.norm();
                const double floor = min_eigenvalue(kubo_ando_mean(f, c, d).entries() -
                                                    kubo_ando_mean(f, a, b).entries());
                w.update(-floor / scale, witness(dim, trial, floor));
            }
        push("joint_monotonicity", 1e-9, w);
    }
    {
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("transformer_inequality");
        for (int dim : cfg.matrix_dims)
            for (int trial = 0; trial < cfg.trials; ++trial) {
                std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt ^ dim, trial));
                const auto a = detail::random_spd(dim, rng);
                const auto b = detail::random_spd(dim, rng);
                const Eigen::MatrixXcd raw = detail::random_gaussian(dim, rng);
                Eigen::MatrixXcd t = 0.5 * (raw + raw.adjoint());
                // keep the congruence well conditioned; the inequality is
                // an equality for invertible transformers
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
                if (es.eigenvalues().cwiseAbs().minCoeff() < 0.05)
                    t += 0.5 * Eigen::MatrixXcd::Identity(dim, dim);
                const PosDefMatrix tat(t * a.entries() * t,
                                       Definiteness::positive_semidefinite);
                const PosDefMatrix tbt(t * b.entries() * t,
                                       Definiteness::positive_semidefinite);
                if (!tat.strictly_positive()) continue;
                const double tnorm = t.operatorNorm();
                const double scale =
                    (a.norm() + b.norm()) * std::max(1.0, tnorm * tnorm);
                const double floor =
                    min_eigenvalue(kubo_ando_mean(f, tat, tbt).entries() -
                                   t * kubo_ando_mean(f, a, b).entries() * t);
                w.update(-floor / scale, witness(dim, trial, floor));
            }
        push("transformer_inequality", 1e-9, w);
    }
    {
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("operator_monotonicity");
        for (int dim : cfg.matrix_dims) {
            if (dim < 2) continue;
            for (int trial = 0; trial < cfg.trials; ++trial) {
                std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt ^ dim, trial));
                const auto a = detail::random_spd(dim, rng);
                const PosDefMatrix b(a.entries() + detail::random_psd(dim, rng));
                const double scale = a.norm() + b.norm();
                const double floor =
                    min_eigenvalue(mat_apply(f, b).entries() - mat_apply(f, a).entries());
                w.update(-floor / scale, witness(dim, trial, floor));
            }
        }
        push("operator_monotonicity", 1e-9, w);
    }
    {
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("arith_harm_sandwich");
        for (int dim : cfg.matrix_dims)
            for (int trial = 0; trial < cfg.trials; ++trial) {
                std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt ^ dim, trial));
                const auto a = detail::random_spd(dim, rng);
                const auto b = detail::random_spd(dim, rng);
                const double scale = a.norm() + b.norm();
                const auto mean = kubo_ando_mean(f, a, b);
                const auto top = classical_mean(ClassicalKind::arithmetic, a, b);
                const auto bot = classical_mean(ClassicalKind::harmonic, a, b);
                const double v =
                    std::max(-min_eigenvalue(top.entries() - mean.entries()),
                             -min_eigenvalue(mean.entries() - bot.entries())) /
                    scale;
                w.update(v, witness(dim, trial, v));
            }
        push("arith_harm_sandwich", 1e-9, w);
    }
    {
        // The gap between consecutive regularized iterates decays like
        // sqrt(eps) for means with a branch point at 0 (the geometric mean
        // among them), so at the schedule end eps ~ 1e-8 the achievable
        // relative gap is ~1e-4, with a log-periodic factor of a few on
        // top for the extremal functions; a genuine semicontinuity
        // failure plateaus at O(1) instead.
        detail::Worst w;
        const std::uint64_t salt = detail::name_salt("upper_semicontinuity");
        const int reg_trials = std::max(1, cfg.trials / 20);
        for (int dim : cfg.matrix_dims) {
            if (dim < 2) continue;
            for (int trial = 0; trial < reg_trials; ++trial) {
                std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt ^ dim, trial));
                const auto a = detail::random_singular_psd(dim, rng);
                const auto b = detail::random_singular_psd(dim, rng);
                const auto r = regularized_mean(f, a, b);
                const double rel = r.cauchy_gap / (1.0 + a.norm() + b.norm());
                w.update(rel, witness(dim, trial, r.cauchy_gap));
            }
        }
        push("upper_semicontinuity", 2e-3, w);
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

inline VerificationReport run_mean_suite(const RepFun& f, const SuiteConfig& cfg) {
    return run_mean_suite([&f](double x) { return f.eval(x); }, f.describe(), cfg);
}

/// Order-structure battery for the type class of period p: the extremal
/// product identity, the two-sided sandwich around interior members, order
/// preservation of the generator parametrization, kernel positivity on the
/// half period, and the degenerate-parameter limits that recover the
/// arithmetic/harmonic pair.
inline VerificationReport run_order_suite(double p, const SuiteConfig& cfg) {
    cfg.require_valid();
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport report;
    report.subject = "order suite: p=" + std::to_string(p);
    report.seed = cfg.seed;

    const auto mod = solve_modulus_for_period(p);
    const double c = std::exp(0.5 * p);
    const auto grid = cfg.grid();

    const auto push = [&](const std::string& name, double fallback_tol,
                          const detail::Worst& w) {
        const double tol = cfg.tol(name, fallback_tol);
        report.checks.push_back({name,
                                 w.final_value() <= tol ? CheckStatus::pass : CheckStatus::fail,
                                 w.final_value(), tol, w.witness});
    };

    // interior family: explicit members plus admissible random generators
    std::vector<RepFun> interior;
    for (int n : {1, 2, 3}) interior.push_back(RepFun::single_harmonic(n, c));
    {
        const std::uint64_t salt = detail::name_salt("interior_generators");
        for (int k = 0; k < 5; ++k) {
            std::mt19937_64 rng(detail::trial_seed(cfg.seed, salt, k));
            std::uniform_real_distribution<double> uc(-1.0, 1.0);
            std::vector<double> coeff(4);
            double sum = 0.0;
            for (double& b : coeff) {
                b = uc(rng);
                sum += std::abs(b);
            }
            for (double& b : coeff) b *= 0.5 / sum; // sum |B_n| = 1/2: admissible
            interior.push_back(RepFun::from_generator(
                StripFunction(GeneratorSpec::fourier(p, coeff), StripMethod::fourier_series)));
        }
    }

    {
        detail::Worst w;
        for (double x : grid) {
            const double v = std::abs(f_extremal(mod, x, ExtremalSide::minimum) *
                                          f_extremal(mod, x, ExtremalSide::maximum) / x -
                                      1.0);
            w.update(v, "x=" + std::to_string(x));
        }
        push("extremal_product", 1e-12, w);
    }
    {
        detail::Worst w;
        for (const auto& f : interior)
            for (double x : grid) {
                const double fx = f.eval(x);
                const double lo = f_extremal(mod, x, ExtremalSide::minimum);
                const double hi = f_extremal(mod, x, ExtremalSide::maximum);
                const double v = std::max(lo - fx, fx - hi) / std::max(1.0, fx);
                w.update(v, f.describe() + " x=" + std::to_string(x));
            }
        push("interior_sandwich", 1e-10, w);
    }
    {
        detail::Worst w;
        const auto thin = log_spaced_grid(cfg.grid_min, cfg.grid_max,
                                          std::min(cfg.grid_count, 17));
        const auto make = [&](double s) {
            return RepFun::from_generator(StripFunction(GeneratorSpec::square_wave(p, s),
                                                        StripMethod::quadrature, 1e-11));
        };
        const auto f_lo = make(-0.3);
        const auto f_mid = make(0.2);
        const auto f_hi = make(0.45);
        for (double x : thin) {
            const double a = f_lo.eval(x);
            const double b = f_mid.eval(x);
            const double cc = f_hi.eval(x);
            w.update((a - b) / std::max(1.0, b), "x=" + std::to_string(x) + " (lo vs mid)");
            w.update((b - cc) / std::max(1.0, cc), "x=" + std::to_string(x) + " (mid vs hi)");
        }
        push("order_preservation", 1e-10, w);
    }
    {
        detail::Worst w;
        for (const auto& f : interior)
            for (double x : grid) {
                const double fx = f.eval(x);
                w.update(std::max(fx - f_arithmetic(x), f_harmonic(x) - fx), // signed defects
                         f.describe() + " x=" + std::to_string(x));
            }
        for (double x : grid) {
            w.update(f_extremal(mod, x, ExtremalSide::maximum) - f_arithmetic(x),
                     "f_max x=" + std::to_string(x));
            w.update(f_harmonic(x) - f_extremal(mod, x, ExtremalSide::minimum),
                     "f_min x=" + std::to_string(x));
        }
        push("classical_envelope", 1e-10, w);
    }
    {
        detail::Worst w;
        const auto near_one = EllipticModulus::from_parameter(1.0 - 1e-12);
        for (double x = 0.1; x <= 10.0; x *= 1.1) {
            w.update(std::abs(f_extremal(near_one, x, ExtremalSide::maximum) - f_arithmetic(x)),
                     "x=" + std::to_string(x));
        }
        push("arithmetic_limit", 1e-4, w);
    }
    {
        detail::Worst w;
        const auto near_one = EllipticModulus::from_parameter(1.0 - 1e-12);
        for (double x = 0.1; x <= 10.0; x *= 1.1) {
            w.update(std::abs(f_extremal(near_one, x, ExtremalSide::minimum) - f_harmonic(x)),
                     "x=" + std::to_string(x));
        }
        push("harmonic_limit", 1e-4, w);
    }
    {
        detail::Worst w;
        const auto params = EllipticKernelParams::for_period(p, 1e-12);
        for (double x : grid) {
            // skip the lattice points x = e^{p k} where the kernel vanishes
            const double k = std::log(x) / p;
            if (std::abs(k - std::round(k)) < 1e-6) continue;
            for (int i = 1; i < 24; ++i) {
                const double lam = 0.5 * p * i / 24.0;
                w.update(-ep_series(params, lam, x),
                         "x=" + std::to_string(x) + " lambda=" + std::to_string(lam));
            }
        }
        push("kernel_positivity", 1e-10, w);
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace molnar
