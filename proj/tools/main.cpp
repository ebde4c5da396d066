// Command-line surface over the mean-construction library: evaluate
// representing functions, compute matrix means, run verification suites,
// and emit the ratio curves of the extremal functions as CSV.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "molnar/molnar.hpp"

namespace {

using molnar::GeneratorSpec;
using molnar::RepFun;
using molnar::StripFunction;
using molnar::StripMethod;

// ---------------------------------------------------------------------------
// small formatting/parsing helpers

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Accepts plain numbers and the shorthand "eN" for e^N (type scalars like
/// e^10 are awkward as 22026.46... literals).
double parse_scalar(const std::string& text) {
    std::size_t pos = 0;
    if (!text.empty() && (text[0] == 'e' || text[0] == 'E')) {
        const double expo = std::stod(text.substr(1), &pos);
        if (pos + 1 != text.size()) throw molnar::domain_error("bad scalar '" + text + "'");
        return std::exp(expo);
    }
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw molnar::domain_error("bad scalar '" + text + "'");
    return v;
}

struct GridSpec {
    double min = 1e-2;
    double max = 1e2;
    int per_decade = 8;

    std::vector<double> points() const {
        const double decades = std::log10(max / min);
        const int count = std::max(2, static_cast<int>(std::lround(decades * per_decade)) + 1);
        return molnar::log_spaced_grid(min, max, count);
    }
};

/// Grid flag syntax: min:max:points_per_decade, log-spaced.
GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw molnar::domain_error("grid must be min:max:points_per_decade, got '" + text + "'");
    g.min = parse_scalar(text.substr(0, c1));
    g.max = parse_scalar(text.substr(c1 + 1, c2 - c1 - 1));
    g.per_decade = std::stoi(text.substr(c2 + 1));
    if (!(g.min > 0.0) || !(g.max > g.min) || g.per_decade < 1)
        throw molnar::domain_error("grid needs 0 < min < max and points_per_decade >= 1");
    return g;
}

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> ps;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) ps.push_back(parse_scalar(tok));
    if (ps.empty()) throw molnar::domain_error("empty period list");
    return ps;
}

// ---------------------------------------------------------------------------
// generator config files
//
// One JSON document per file:
//   {"period": 6.2832, "form": "fourier", "coefficients": [0.5]}
//   {"period": 20,     "form": "square_wave", "amplitude": 0.5}
//   {"period": 5,      "form": "zero"}

GeneratorSpec load_generator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw molnar::domain_error("cannot open generator file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw molnar::domain_error("generator file '" + path + "': " + e.what());
    }
    if (!j.contains("period") || !j.contains("form"))
        throw molnar::domain_error("generator file needs 'period' and 'form'");
    const double period = j["period"].get<double>();
    const std::string form = j["form"].get<std::string>();
    if (form == "zero") return GeneratorSpec::zero(period);
    if (form == "square_wave") {
        if (!j.contains("amplitude"))
            throw molnar::domain_error("square_wave form needs 'amplitude'");
        return GeneratorSpec::square_wave(period, j["amplitude"].get<double>());
    }
    if (form == "fourier") {
        if (!j.contains("coefficients"))
            throw molnar::domain_error("fourier form needs 'coefficients'");
        return GeneratorSpec::fourier(period, j["coefficients"].get<std::vector<double>>());
    }
    throw molnar::domain_error("unknown form '" + form + "'");
}

// ---------------------------------------------------------------------------
// function source resolution

struct FunctionOptions {
    std::string generator_file;
    std::string kind;
    int n = 1;
    std::string c_text;
    double alpha = 0.0;
    double p = 20.0;

    bool has_kind() const { return !kind.empty(); }
    bool has_generator() const { return !generator_file.empty(); }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--generator", generator_file,
                        "generator config file (JSON; one document per file)");
        cmd->add_option("--kind", kind,
                        "built-in function: geometric|arithmetic|harmonic|fn|falpha|fmin|fmax");
        cmd->add_option("--n", n, "harmonic index for --kind fn (nonzero integer)");
        cmd->add_option("--c", c_text, "type scalar for --kind fn (accepts e10 shorthand)");
        cmd->add_option("--alpha", alpha, "frequency for --kind falpha");
        cmd->add_option("--p", p, "period for --kind fmin/fmax");
    }

    RepFun resolve() const {
        if (has_kind() == has_generator())
            throw molnar::domain_error(
                "exactly one function source required: --generator or --kind");
        if (has_generator()) {
            const auto gen = load_generator(generator_file);
            const auto report = molnar::validate(gen);
            if (!report.ok())
                throw molnar::domain_error("generator rejected: " +
                                           report.violations.front().constraint + " (" +
                                           report.violations.front().detail + ")");
            const auto method = gen.form() == GeneratorSpec::Form::square_wave
                                    ? StripMethod::quadrature
                                    : StripMethod::fourier_series;
            return RepFun::from_generator(StripFunction(gen, method, 1e-11));
        }
        if (kind == "geometric") return RepFun::geometric();
        if (kind == "arithmetic") return RepFun::arithmetic();
        if (kind == "harmonic") return RepFun::harmonic();
        if (kind == "fn") {
            if (c_text.empty()) throw molnar::domain_error("--kind fn needs --c");
            return RepFun::single_harmonic(n, parse_scalar(c_text));
        }
        if (kind == "falpha") {
            if (alpha == 0.0) throw molnar::domain_error("--kind falpha needs nonzero --alpha");
            return RepFun::single_harmonic_alpha(alpha);
        }
        if (kind == "fmin")
            return RepFun::extremal_min(molnar::solve_modulus_for_period(p));
        if (kind == "fmax")
            return RepFun::extremal_max(molnar::solve_modulus_for_period(p));
        throw molnar::domain_error("unknown --kind '" + kind + "'");
    }
};

// ---------------------------------------------------------------------------
// output plumbing

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw molnar::domain_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MOLNAR_SEED")) return std::strtoull(env, nullptr, 10);
    return 20250808ULL;
}

// ---------------------------------------------------------------------------
// subcommand bodies (config resolution already done; throws map to exit 3)

int cmd_eval(const RepFun& f, const GridSpec& grid, const std::string& out_path) {
    Output out(out_path);
    out.stream() << "x,f(x),f(x)/sqrt(x)\n";
    for (double x : grid.points()) {
        const double fx = f.eval(x);
        out.stream() << fmt(x) << ',' << fmt(fx) << ',' << fmt(fx / std::sqrt(x)) << '\n';
    }
    return 0;
}

int cmd_extremal(const std::vector<double>& ps, const GridSpec& grid,
                 const std::string& out_path) {
    std::vector<molnar::EllipticModulus> mods;
    for (double p : ps) mods.push_back(molnar::solve_modulus_for_period(p));
    Output out(out_path);
    out.stream() << "x";
    for (double p : ps) {
        std::string tag = std::to_string(p);
        tag.erase(tag.find_last_not_of('0') + 1);
        if (!tag.empty() && tag.back() == '.') tag.pop_back();
        out.stream() << ",f_min/sqrt(x)[p=" << tag << "],f_max/sqrt(x)[p=" << tag << "]";
    }
    out.stream() << "\n";
    for (double x : grid.points()) {
        out.stream() << fmt(x);
        const double rt = std::sqrt(x);
        for (const auto& mod : mods) {
            out.stream() << ','
                         << fmt(molnar::f_extremal(mod, x, molnar::ExtremalSide::minimum) / rt)
                         << ','
                         << fmt(molnar::f_extremal(mod, x, molnar::ExtremalSide::maximum) / rt);
        }
        out.stream() << '\n';
    }
    return 0;
}

int cmd_plot_data(const std::vector<double>& ps, const GridSpec& grid,
                  const std::string& out_path) {
    std::vector<molnar::EllipticModulus> mods;
    for (double p : ps) mods.push_back(molnar::solve_modulus_for_period(p));
    const RepFun f1 = RepFun::single_harmonic(1, std::exp(0.5 * ps.front()));
    Output out(out_path);
    out.stream() << "x,f_harm/sqrt(x),f_arith/sqrt(x)";
    for (double p : ps) {
        std::string tag = std::to_string(p);
        tag.erase(tag.find_last_not_of('0') + 1);
        if (!tag.empty() && tag.back() == '.') tag.pop_back();
        out.stream() << ",f_min/sqrt(x)[p=" << tag << "],f_max/sqrt(x)[p=" << tag << "]";
    }
    out.stream() << ",f_1/sqrt(x)[p=" << ps.front() << "]\n";
    for (double x : grid.points()) {
        const double rt = std::sqrt(x);
        out.stream() << fmt(x) << ',' << fmt(molnar::f_harmonic(x) / rt) << ','
                     << fmt(molnar::f_arithmetic(x) / rt);
        for (const auto& mod : mods) {
            out.stream() << ','
                         << fmt(molnar::f_extremal(mod, x, molnar::ExtremalSide::minimum) / rt)
                         << ','
                         << fmt(molnar::f_extremal(mod, x, molnar::ExtremalSide::maximum) / rt);
        }
        out.stream() << ',' << fmt(f1.eval(x) / rt) << '\n';
    }
    return 0;
}

molnar::PosDefMatrix load_matrix(const std::string& path, molnar::Definiteness mode) {
    std::ifstream in(path);
    if (!in) throw molnar::domain_error("cannot open matrix file '" + path + "'");
    return molnar::PosDefMatrix(molnar::read_matrix(in), mode);
}

int cmd_mean(const RepFun& f, const std::string& a_path, const std::string& b_path,
             bool regularize, const std::string& out_path) {
    const auto mode =
        regularize ? molnar::Definiteness::positive_semidefinite : molnar::Definiteness::positive_definite;
    const auto a = load_matrix(a_path, mode);
    const auto b = load_matrix(b_path, mode);
    Output out(out_path);
    if (regularize) {
        const auto r = molnar::regularized_mean(f, a, b);
        if (!r.converged)
            std::cerr << "warning: regularization gap " << r.cauchy_gap
                      << " above 1e-6 at schedule end\n";
        molnar::write_matrix(out.stream(), r.value.entries());
        return 0;
    }
    molnar::PosDefMatrix result = [&] {
        if (f.kind() == RepFun::Kind::arithmetic)
            return molnar::classical_mean(molnar::ClassicalKind::arithmetic, a, b);
        if (f.kind() == RepFun::Kind::harmonic)
            return molnar::classical_mean(molnar::ClassicalKind::harmonic, a, b);
        if (f.kind() == RepFun::Kind::geometric)
            return molnar::classical_mean(molnar::ClassicalKind::geometric, a, b);
        return molnar::kubo_ando_mean(f, a, b);
    }();
    molnar::write_matrix(out.stream(), result.entries());
    return 0;
}

int cmd_verify(const std::string& suite, const std::optional<RepFun>& func, double type_c,
               double order_p, const molnar::SuiteConfig& cfg, const std::string& json_path) {
    molnar::VerificationReport report;
    if (suite == "function") {
        report = molnar::run_function_suite(*func, type_c, cfg);
    } else if (suite == "mean") {
        report = molnar::run_mean_suite(*func, cfg);
    } else {
        report = molnar::run_order_suite(order_p, cfg);
    }
    report.write_lines(std::cout);
    if (!json_path.empty()) {
        Output out(json_path);
        out.stream() << report.to_json().dump(2) << "\n";
    }
    return report.all_passed() ? 0 : 1;
}

int cmd_recover(const GeneratorSpec& gen, int points, const std::string& out_path) {
    // the quadrature route makes the recovery an honest round trip through
    // the integral representation
    const StripFunction strip(gen, StripMethod::quadrature, 1e-10);
    const double p = gen.period();

    // half-width of the exclusion window around each jump of a square wave
    const double exclusion = 0.05 * p;
    const auto near_jump = [&](double lambda) {
        if (gen.form() != GeneratorSpec::Form::square_wave) return false;
        const double r = std::fmod(std::abs(lambda), 0.5 * p);
        return std::min(r, 0.5 * p - r) < exclusion;
    };

    Output out(out_path);
    out.stream() << "lambda,psi_true,psi_recovered,abs_err\n";
    for (int i = 0; i < points; ++i) {
        const double lambda = -0.5 * p + p * (i + 0.5) / points;
        const double truth = gen.eval(lambda);
        double recovered;
        try {
            recovered = molnar::psi_recover(strip, lambda);
        } catch (const molnar::convergence_error&) {
            if (!near_jump(lambda)) throw; // genuine failure outside the windows
            out.stream() << fmt(lambda) << ',' << fmt(truth) << ",nan,nan\n";
            continue;
        }
        out.stream() << fmt(lambda) << ',' << fmt(truth) << ',' << fmt(recovered) << ','
                     << fmt(std::abs(recovered - truth)) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric Kubo-Ando operator means with a scaling symmetry: "
                 "construction from generators, matrix evaluation, verification"};
    app.require_subcommand(1);

    FunctionOptions fopt;
    std::string grid_text = "1e-2:1e2:8";
    std::string out_path = "-";
    std::string p_list_text;
    std::string a_path, b_path;
    bool regularize = false;
    std::string suite;
    double order_p = 20.0;
    int trials = 500;
    int recover_points = 65;
    std::string json_path;
    std::uint64_t seed = default_seed();

    auto* eval = app.add_subcommand("eval", "tabulate x, f(x), f(x)/sqrt(x) as CSV");
    fopt.add_flags(eval);
    eval->add_option("--grid", grid_text, "log grid min:max:points_per_decade");
    eval->add_option("--out", out_path, "output file ('-' for stdout)");

    auto* extremal = app.add_subcommand(
        "extremal", "tabulate the extremal ratio curves f_min/sqrt, f_max/sqrt per period");
    extremal->add_option("--p", p_list_text, "period or comma-separated list (e.g. 10,15,20,25)")
        ->required();
    extremal->add_option("--grid", grid_text, "log grid min:max:points_per_decade");
    extremal->add_option("--out", out_path, "output file ('-' for stdout)");

    auto* plot = app.add_subcommand(
        "plot-data", "figure-style dataset: extremal ratios for a period sweep plus the "
                     "classical envelope and the first interior member");
    plot->add_option("--p", p_list_text, "comma-separated period list (default 10,15,20,25)");
    plot->add_option("--grid", grid_text, "log grid min:max:points_per_decade");
    plot->add_option("--out", out_path, "output file ('-' for stdout)");

    auto* mean = app.add_subcommand("mean", "matrix mean of two positive matrices");
    fopt.add_flags(mean);
    mean->add_option("--a", a_path, "first matrix file")->required();
    mean->add_option("--b", b_path, "second matrix file")->required();
    mean->add_flag("--regularize", regularize,
                   "allow semidefinite inputs via the regularization schedule");
    mean->add_option("--out", out_path, "output file ('-' for stdout)");

    auto* verify = app.add_subcommand("verify", "run a verification suite, exit 0 iff all pass");
    fopt.add_flags(verify);
    verify->add_option("--suite", suite, "function | mean | order")->required();
    verify->add_option("--order-p", order_p, "period for the order suite");
    verify->add_option("--trials", trials, "random trials per dimension");
    verify->add_option("--grid", grid_text, "log grid min:max:points_per_decade");
    verify->add_option("--seed", seed, "RNG seed (env MOLNAR_SEED overrides the default)");
    verify->add_option("--json", json_path, "also write the report as JSON to this path");

    auto* recover = app.add_subcommand(
        "recover", "recover the generator from its strip function via the boundary limit");
    recover->add_option("--generator", fopt.generator_file, "generator config file")->required();
    recover->add_option("--points", recover_points, "rows over one period");
    recover->add_option("--out", out_path, "output file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    // configuration-stage validation -> exit 2; numerical failures -> exit 3
    GridSpec grid;
    std::vector<double> ps{10.0, 15.0, 20.0, 25.0};
    molnar::SuiteConfig cfg;
    std::optional<RepFun> func;
    std::optional<GeneratorSpec> recover_gen;
    double type_c = 0.0;
    try {
        grid = parse_grid(grid_text);
        if (!p_list_text.empty()) ps = parse_p_list(p_list_text);
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.grid_min = grid.min;
        cfg.grid_max = grid.max;
        cfg.grid_count = static_cast<int>(grid.points().size());
        cfg.require_valid();
        if (app.got_subcommand(eval) || app.got_subcommand(mean) ||
            (app.got_subcommand(verify) && suite != "order"))
            func = fopt.resolve();
        if (app.got_subcommand(verify)) {
            if (suite == "function") {
                // --c doubles as the type scalar under test (the
                // `verify --suite function --kind arithmetic --c 2` usage)
                type_c =
                    fopt.c_text.empty() ? func->type_c().value_or(0.0) : parse_scalar(fopt.c_text);
                if (!(type_c > 1.0))
                    throw molnar::domain_error(
                        "function suite needs --c > 1 (or a typed function)");
            } else if (suite != "mean" && suite != "order") {
                throw molnar::domain_error("unknown suite '" + suite +
                                           "' (function|mean|order)");
            }
        }
        if (app.got_subcommand(recover)) {
            recover_gen = load_generator(fopt.generator_file);
            const auto report = molnar::validate(*recover_gen);
            if (!report.ok())
                throw molnar::domain_error("generator rejected: " +
                                           report.violations.front().constraint);
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(eval)) return cmd_eval(*func, grid, out_path);
        if (app.got_subcommand(extremal)) return cmd_extremal(ps, grid, out_path);
        if (app.got_subcommand(plot)) return cmd_plot_data(ps, grid, out_path);
        if (app.got_subcommand(mean))
            return cmd_mean(*func, a_path, b_path, regularize, out_path);
        if (app.got_subcommand(verify))
            return cmd_verify(suite, func, type_c, order_p, cfg, json_path);
        if (app.got_subcommand(recover))
            return cmd_recover(*recover_gen, recover_points, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
