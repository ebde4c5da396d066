// Acceptance battery: one pass/fail line per criterion, exit code = number
// of failed criteria. Invoke with the CLI binary path as argv[1] (the
// figure-data criterion drives the real executable end to end).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "molnar/molnar.hpp"

using namespace molnar;
using cplx = std::complex<double>;

namespace {

const double pi = std::numbers::pi;

struct Harness {
    int failures = 0;

    void run(const std::string& name, const std::function<std::string()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!detail.empty() && detail.rfind("FAIL", 0) == 0) ok = false;
        std::printf("%s  %-28s %s  (%.2f s)\n", ok ? "PASS" : "FAIL", name.c_str(),
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::string fail(const std::string& why) { return "FAIL: " + why; }

std::vector<double> grid64(double lo, double hi) { return log_spaced_grid(lo, hi, 64); }

/// Random admissible Fourier generator; the seed is part of the record.
GeneratorSpec random_fourier_generator(double period, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    std::uniform_real_distribution<double> uscale(0.5, 1.0);
    std::vector<double> coeff(6);
    double sum = 0.0;
    for (double& b : coeff) {
        b = uc(rng);
        sum += std::abs(b);
    }
    const double target = 0.5 * uscale(rng); // sum |B_n| <= 1/2: admissible
    for (double& b : coeff) b *= target / sum;
    return GeneratorSpec::fourier(period, coeff);
}

// --------------------------------------------------------------------------
// criterion bodies

std::string criterion_route_equivalence() {
    constexpr std::uint64_t base_seed = 0xA11CE;
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const auto gen = random_fourier_generator(8.0 + k, base_seed + k);
        const auto f = RepFun::from_generator(StripFunction(gen, StripMethod::fourier_series));
        for (double x : grid64(1e-3, 1e3)) {
            const double series_route = f.eval(x);
            const double integral_route = f_integral_eval(gen, cplx(x, 0.0), 1e-10).real();
            worst = std::max(worst, std::abs(series_route - integral_route));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |f_series - f_integral| = %.3g (<= 1e-8)", worst);
    return worst <= 1e-8 ? buf : fail(buf);
}

std::string criterion_round_trip() {
    double worst_smooth = 0.0;
    const std::vector<GeneratorSpec> smooth = {
        GeneratorSpec::fourier(2.0 * pi, {0.5}),
        GeneratorSpec::fourier(4.0, {0.3, 0.1}),
        random_fourier_generator(10.0, 0xB0B),
    };
    for (const auto& gen : smooth) {
        const StripFunction strip(gen, StripMethod::quadrature, 1e-10);
        const double p = gen.period();
        for (int i = 0; i < 64; ++i) {
            const double lam = -0.5 * p + p * (i + 0.5) / 64.0;
            worst_smooth =
                std::max(worst_smooth, std::abs(psi_recover(strip, lam) - gen.eval(lam)));
        }
    }

    // square wave: only points outside the exclusion windows around jumps
    const double p = 20.0;
    const auto sq = GeneratorSpec::square_wave(p, 0.5);
    const StripFunction strip(sq, StripMethod::quadrature, 1e-10);
    double worst_square = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double lam = -0.5 * p + p * (i + 0.5) / 64.0;
        const double r = std::fmod(std::abs(lam), 0.5 * p);
        if (std::min(r, 0.5 * p - r) < 0.05 * p) continue;
        worst_square = std::max(worst_square, std::abs(psi_recover(strip, lam) - sq.eval(lam)));
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "sup err smooth = %.3g, square wave (outside windows) = %.3g (<= 1e-5)",
                  worst_smooth, worst_square);
    return (worst_smooth <= 1e-5 && worst_square <= 1e-5) ? buf : fail(buf);
}

std::string criterion_scaling() {
    const double c = std::exp(10.0);
    const auto mod = solve_modulus_for_period(20.0);
    std::vector<RepFun> funcs;
    for (int n : {1, 2, 3}) funcs.push_back(RepFun::single_harmonic(n, c));
    funcs.push_back(RepFun::extremal_min(mod));
    funcs.push_back(RepFun::extremal_max(mod));
    for (int k = 0; k < 5; ++k)
        funcs.push_back(RepFun::from_generator(StripFunction(
            random_fourier_generator(20.0, 0xC0FFEE + k), StripMethod::fourier_series)));

    double worst = 0.0;
    for (const auto& f : funcs)
        for (double x : grid64(1e-3, 1e3))
            worst = std::max(worst, std::abs(f.eval(c * c * x) / (c * f.eval(x)) - 1.0));
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |f(c^2 x)/(c f(x)) - 1| = %.3g (<= 1e-10)", worst);
    return worst <= 1e-10 ? buf : fail(buf);
}

std::string criterion_elliptic_cross_check() {
    const double p = 20.0;
    const auto params = EllipticKernelParams::for_period(p, 1e-12);
    const auto mod = solve_modulus_for_period(p);
    const double c = std::exp(0.5 * p);

    double worst_jacobi = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double lam = 0.1 + (0.5 * p - 0.2) * i / 63.0;
        worst_jacobi =
            std::max(worst_jacobi, std::abs(ep_series(params, lam, c) - ep_jacobi(mod, lam)));
    }

    const std::vector<cplx> ws = {
        {0.3, 0.0}, {1.0, 0.0}, {-2.5, 0.0}, {10.0, 0.0},
        {2.0, 1.5}, {-4.0, -0.8}, {0.5, 2.5}, {7.0, -2.0},
    };
    double worst_fc = 0.0;
    for (int n = 1; n <= 4; ++n)
        for (const cplx w : ws) {
            // seeded panels: the sine's zeros alias the plain Simpson nodes
            const cplx lhs = adaptive_simpson_seeded(
                [&](double lam) {
                    return ep_series(params, lam, std::exp(w)) * std::sin(2.0 * pi * n * lam / p);
                },
                0.0, 0.5 * p, 1e-9, p / (4.0 * n));
            worst_fc = std::max(worst_fc, std::abs(lhs - ep_fourier_coefficient(p, n, w)));
        }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max |series - jacobi| = %.3g (<= 1e-8), coeff identity = %.3g (<= 1e-6)",
                  worst_jacobi, worst_fc);
    return (worst_jacobi <= 1e-8 && worst_fc <= 1e-6) ? buf : fail(buf);
}

std::string criterion_extremal_identities() {
    const double p = 20.0;
    const auto mod = solve_modulus_for_period(p);
    const auto params = EllipticKernelParams::for_period(p, 1e-12);

    double worst_product = 0.0;
    for (double x : grid64(1e-3, 1e3))
        worst_product = std::max(
            worst_product, std::abs(f_extremal(mod, x, ExtremalSide::minimum) *
                                        f_extremal(mod, x, ExtremalSide::maximum) / x -
                                    1.0));

    double worst_quad = 0.0;
    for (double x : log_spaced_grid(1e-2, 1e2, 16)) {
        const double s_star = 0.5 * adaptive_simpson_seeded(
                                        [&](double lam) { return ep_series(params, lam, x); },
                                        0.0, 0.5 * p, 1e-9, 0.125 * p);
        const double via_kernel = std::sqrt(x) * std::exp(-s_star);
        worst_quad = std::max(
            worst_quad, std::abs(via_kernel - f_extremal(mod, x, ExtremalSide::minimum)));
    }

    const auto near_one = EllipticModulus::from_parameter(1.0 - 1e-12);
    double worst_limit = 0.0;
    for (double x = 0.1; x <= 10.0; x *= 1.07) {
        worst_limit = std::max(worst_limit, std::abs(f_extremal(near_one, x, ExtremalSide::maximum) -
                                                     f_arithmetic(x)));
        worst_limit = std::max(worst_limit, std::abs(f_extremal(near_one, x, ExtremalSide::minimum) -
                                                     f_harmonic(x)));
    }

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "product = %.3g (<= 1e-12), kernel quadrature = %.3g (<= 1e-7), "
                  "degenerate limit = %.3g (<= 1e-4)",
                  worst_product, worst_quad, worst_limit);
    return (worst_product <= 1e-12 && worst_quad <= 1e-7 && worst_limit <= 1e-4) ? buf
                                                                                 : fail(buf);
}

std::string criterion_axiom_battery() {
    SuiteConfig cfg;
    cfg.trials = 500;
    cfg.matrix_dims = {2, 3, 4, 5};
    cfg.seed = 0xAB5;

    const auto mod = solve_modulus_for_period(20.0);
    struct Entry {
        std::string name;
        RepFun f;
    };
    const std::vector<Entry> funcs = {
        {"f_geom", RepFun::geometric()},
        {"f_arith", RepFun::arithmetic()},
        {"f_harm", RepFun::harmonic()},
        {"f_1", RepFun::single_harmonic(1, std::exp(10.0))},
        {"f_min", RepFun::extremal_min(mod)},
        {"f_max", RepFun::extremal_max(mod)},
    };
    std::string problems;
    for (const auto& [name, f] : funcs) {
        const auto report = run_mean_suite(f, cfg);
        for (const auto& check : report.checks)
            if (check.status == CheckStatus::fail)
                problems += " " + name + ":" + check.name;
    }

    // negative control: x^2 is not operator monotone and must be caught
    SuiteConfig neg = cfg;
    neg.matrix_dims = {2, 3};
    const auto control =
        run_mean_suite([](double x) { return x * x; }, "corrupted x^2", neg);
    bool control_caught = false;
    for (const auto& check : control.checks)
        if (check.name == "operator_monotonicity" && check.status == CheckStatus::fail)
            control_caught = true;

    if (!problems.empty()) return fail("failed checks:" + problems);
    if (!control_caught) return fail("negative control x^2 slipped through monotonicity");
    return "6 functions x 8 checks, 500 trials/dim, dims 2-5; x^2 control caught";
}

// CSV helpers for the figure-data criterion
std::vector<std::vector<double>> parse_csv(const std::string& path, std::string& header) {
    std::ifstream in(path);
    std::vector<std::vector<double>> rows;
    if (!std::getline(in, header)) return rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::string criterion_figure_data(const std::string& cli) {
    if (cli.empty()) return fail("no CLI binary path given (pass it as argv[1])");
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string pid = std::to_string(::getpid());
    const std::string single = (tmp / ("acc_extremal_p20." + pid + ".csv")).string();
    const std::string single2 = (tmp / ("acc_extremal_rerun." + pid + ".csv")).string();
    const std::string sweep = (tmp / ("acc_extremal_sweep." + pid + ".csv")).string();

    const auto sh = [&](const std::string& cmd) { return std::system(cmd.c_str()); };
    if (sh(cli + " extremal --p 20 --grid 1e-2:1e2:8 --out " + single) != 0)
        return fail("extremal --p 20 exited nonzero");
    if (sh(cli + " extremal --p 20 --grid 1e-2:1e2:8 --out " + single2) != 0)
        return fail("extremal rerun exited nonzero");
    if (sh(cli + " extremal --p 10,15,20,25 --grid 1e-2:1e2:8 --out " + sweep) != 0)
        return fail("extremal sweep exited nonzero");

    {
        std::ifstream f1(single), f2(single2);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        if (s1.str() != s2.str() || s1.str().empty())
            return fail("CSV output is not bit-stable across identical runs");
    }

    std::string header;
    const auto rows = parse_csv(single, header);
    if (rows.size() != 33 || header != "x,f_min/sqrt(x)[p=20],f_max/sqrt(x)[p=20]")
        return fail("unexpected extremal CSV shape: " + header);

    // ratios are 1 at x = 1, even in log x, and strictly bracket 1 elsewhere
    const int mid = 16;
    if (std::abs(rows[mid][0] - 1.0) > 1e-12) return fail("grid does not contain x = 1");
    if (std::abs(rows[mid][1] - 1.0) > 1e-12 || std::abs(rows[mid][2] - 1.0) > 1e-12)
        return fail("ratio columns differ from 1 at x = 1");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& lo_row = rows[i];
        const auto& hi_row = rows[rows.size() - 1 - i];
        if (std::abs(lo_row[1] - hi_row[1]) > 1e-9 || std::abs(lo_row[2] - hi_row[2]) > 1e-9)
            return fail("ratio columns are not even in log x");
        if (static_cast<int>(i) != mid) {
            if (!(lo_row[1] < 1.0 && lo_row[2] > 1.0))
                return fail("f_min/sqrt < 1 < f_max/sqrt violated at x = " +
                            std::to_string(lo_row[0]));
        }
    }

    // sweep: widening toward the classical envelope as p grows
    std::string sweep_header;
    const auto sw = parse_csv(sweep, sweep_header);
    if (sw.empty() || sw.front().size() != 9) return fail("unexpected sweep CSV shape");
    for (const auto& row : sw) {
        const double x = row[0];
        const double arith_ratio = f_arithmetic(x) / std::sqrt(x);
        const double harm_ratio = f_harmonic(x) / std::sqrt(x);
        for (int k = 0; k + 1 < 4; ++k) {
            if (row[1 + 2 * k] < row[1 + 2 * (k + 1)] - 1e-12)
                return fail("f_min ratio failed to decrease with p at x = " + std::to_string(x));
            if (row[2 + 2 * k] > row[2 + 2 * (k + 1)] + 1e-12)
                return fail("f_max ratio failed to increase with p at x = " + std::to_string(x));
        }
        if (!(row[8] <= arith_ratio + 1e-12 && row[7] >= harm_ratio - 1e-12))
            return fail("sweep escapes the classical envelope at x = " + std::to_string(x));
    }
    return "extremal p=20 and p=10,15,20,25 sweep reproduce the figure data";
}

std::string criterion_order_preservation() {
    const double p = 20.0;
    const auto make = [&](double s) {
        return RepFun::from_generator(
            StripFunction(GeneratorSpec::square_wave(p, s), StripMethod::quadrature, 1e-11));
    };
    const std::vector<std::pair<double, double>> pairs = {
        {0.1, 0.3}, {0.3, 0.5}, {-0.5, -0.2}, {-0.2, 0.4}};
    double worst = -1.0;
    for (const auto& [s1, s2] : pairs) {
        const auto f1 = make(s1);
        const auto f2 = make(s2);
        for (double x : log_spaced_grid(1e-2, 1e2, 17)) {
            const double v1 = f1.eval(x);
            const double v2 = f2.eval(x);
            worst = std::max(worst, (v1 - v2) / std::max(1.0, v2));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max (f_lo - f_hi)/scale = %.3g (<= 1e-10)", worst);
    return worst <= 1e-10 ? buf : fail(buf);
}

std::string criterion_geometric_degeneration() {
    const auto gen = GeneratorSpec::zero(6.0);
    const auto f_series = RepFun::from_generator(StripFunction(gen, StripMethod::fourier_series));
    const auto f_quad = RepFun::from_generator(StripFunction(gen, StripMethod::quadrature));
    // measured relative to sqrt(x): above x ~ 500 an absolute 1e-14 sits
    // below the roundoff of sqrt itself
    double worst_rel = 0.0;
    for (double x : grid64(1e-3, 1e3)) {
        const double rt = std::sqrt(x);
        worst_rel = std::max({worst_rel, std::abs(f_series.eval(x) - rt) / rt,
                              std::abs(f_quad.eval(x) - rt) / rt,
                              std::abs(f_integral_eval(gen, cplx(x, 0.0)).real() - rt) / rt});
    }
    char buf2[128];
    std::snprintf(buf2, sizeof(buf2), "max |f/sqrt(x) - 1| = %.3g (<= 1e-14)", worst_rel);
    return worst_rel <= 1e-14 ? buf2 : fail(buf2);
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    Harness h;

    const auto timed = [&](const char* name, double budget_seconds,
                           const std::function<std::string()>& body) {
        h.run(name, [&]() -> std::string {
            const auto t0 = std::chrono::steady_clock::now();
            std::string msg = body();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (msg.rfind("FAIL", 0) != 0 && secs > budget_seconds)
                return fail(msg + " [runtime " + std::to_string(secs) + " s over budget " +
                            std::to_string(budget_seconds) + " s]");
            return msg;
        });
    };

    timed("1 route-equivalence", 10.0, criterion_route_equivalence);
    timed("2 boundary-round-trip", 30.0, criterion_round_trip);
    h.run("3 type-scaling", criterion_scaling);
    h.run("4 elliptic-cross-check", criterion_elliptic_cross_check);
    h.run("5 extremal-identities", criterion_extremal_identities);
    timed("6 axiom-battery", 60.0, criterion_axiom_battery);
    h.run("7 figure-data", [&] { return criterion_figure_data(cli); });
    h.run("8 order-preservation", criterion_order_preservation);
    h.run("9 geometric-degeneration", criterion_geometric_degeneration);

    std::printf("%d/9 criteria passed\n", 9 - h.failures);
    return h.failures;
}
