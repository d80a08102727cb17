// Command-line front end: evaluate operators, run the series decomposition,
// solve FDE initial-value problems, fit the population-growth models, and
// emit plot-ready CSV.
//
// Exit codes: 0 ok, 2 usage error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psifrac/csv.hpp"
#include "psifrac/decomposition.hpp"
#include "psifrac/errors.hpp"
#include "psifrac/fde.hpp"
#include "psifrac/fitting.hpp"
#include "psifrac/kernels.hpp"
#include "psifrac/operators.hpp"
#include "psifrac/special_functions.hpp"

namespace {

using namespace psifrac;

struct OutputTarget {
    std::unique_ptr<std::ofstream> file;
    std::ostream& stream() { return file ? *file : std::cout; }
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
};

// Registry entry for --fn: the function with analytic derivatives for the
// quadrature path, plus its closed-form derivative when one exists.
struct EvalFn {
    SmoothFn fn;
    std::function<std::optional<double>(double)> exact;  // nullopt when unavailable
};

EvalFn make_eval_fn(const std::string& name, const Kernel& k, double alpha, double a) {
    const double pa = k.psi(a);
    if (name == "pow2") {
        auto f = SmoothFn::analytic(
            [&k, pa](double x) { double w = k.psi(x) - pa; return w * w; },
            {[&k, pa](double x) { return 2.0 * (k.psi(x) - pa) * k.dpsi(x); },
             [&k, pa](double x) {
                 double p1 = k.dpsi(x);
                 return 2.0 * p1 * p1 + 2.0 * (k.psi(x) - pa) * k.d2psi(x);
             },
             [&k, pa](double x) {
                 return 6.0 * k.dpsi(x) * k.d2psi(x) + 2.0 * (k.psi(x) - pa) * k.d3psi(x);
             }});
        Kernel kc = k;
        auto exact = [kc, alpha, a](double x) -> std::optional<double> {
            return ops::power_rule(kc, alpha, ops::Side::left, a, 3.0, x);
        };
        return {f, exact};
    }
    if (name == "mlexp") {
        auto f = ops::ml_eigen_fn(k, alpha, 1.0, a);
        auto exact = [&k, alpha, a](double x) -> std::optional<double> {
            return ops::ml_eigen(k, alpha, 1.0, ops::Side::left, a, x).derivative;
        };
        return {f, exact};
    }
    if (name == "ln2p1") {
        auto f = SmoothFn::analytic(
            [](double x) { double l = std::log1p(x); return l * l; },
            {[](double x) { return 2.0 * std::log1p(x) / (x + 1.0); },
             [](double x) {
                 double l = std::log1p(x), s = (x + 1.0) * (x + 1.0);
                 return (2.0 - 2.0 * l) / s;
             },
             [](double x) {
                 double l = std::log1p(x), c = (x + 1.0) * (x + 1.0) * (x + 1.0);
                 return (4.0 * l - 6.0) / c;
             }});
        std::function<std::optional<double>(double)> exact = [](double) {
            return std::optional<double>{};
        };
        if (k.name() == "log1p" && a == 0.0) {
            Kernel kc = k;
            exact = [kc, alpha, a](double x) -> std::optional<double> {
                return ops::power_rule(kc, alpha, ops::Side::left, a, 3.0, x);
            };
        }
        return {f, exact};
    }
    if (name == "parab") {
        auto f = SmoothFn::analytic([](double x) { return 2.0 * x - x * x; },
                                    {[](double x) { return 2.0 - 2.0 * x; },
                                     [](double) { return -2.0; }, [](double) { return 0.0; }});
        std::function<std::optional<double>(double)> exact = [](double) {
            return std::optional<double>{};
        };
        if (k.name() == "linear" && a == 0.0) {
            Kernel kc = k;
            exact = [kc, alpha](double x) -> std::optional<double> {
                return 2.0 * ops::power_rule(kc, alpha, ops::Side::left, 0.0, 2.0, x) -
                       ops::power_rule(kc, alpha, ops::Side::left, 0.0, 3.0, x);
            };
        }
        return {f, exact};
    }
    throw std::invalid_argument("unknown --fn '" + name +
                                "' (expected pow2, mlexp, ln2p1 or parab)");
}

std::vector<double> uniform_grid(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("--grid must be at least 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    g.back() = b;
    return g;
}

int cmd_eval(const std::string& kernel_spec, double alpha, double a, double b, int grid,
             const std::string& fn_name, const std::string& out_path) {
    Kernel k = parse_kernel(kernel_spec);
    Interval iv(a, b);
    validate_or_throw(k, iv);
    EvalFn ef = make_eval_fn(fn_name, k, alpha, a);
    auto spec = ops::DerivativeSpec::left(alpha, a);
    OutputTarget out(out_path);
    out.stream() << "x,exact,quadrature\n";
    for (double x : uniform_grid(a, b, grid)) {
        double q = ops::caputo_derivative(k, spec, ef.fn, x);
        auto e = ef.exact(x);
        out.stream() << format_double(x) << ',' << (e ? format_double(*e) : std::string())
                     << ',' << format_double(q) << "\n";
    }
    return 0;
}

int cmd_approx(const std::string& kernel_spec, double alpha, double a, double b, int grid,
               const std::string& fn_name, std::vector<int> Ns, const std::string& out_path) {
    if (Ns.empty()) Ns = {1, 3, 5};
    for (int N : Ns)
        if (N < 1) throw std::invalid_argument("--N entries must be >= 1");
    Kernel k = parse_kernel(kernel_spec);
    Interval iv(a, b);
    validate_or_throw(k, iv);
    EvalFn ef = make_eval_fn(fn_name, k, alpha, a);
    auto spec = ops::DerivativeSpec::left(alpha, a);
    auto grid_x = uniform_grid(a, b, grid);

    std::vector<std::vector<double>> cols;
    cols.reserve(Ns.size());
    for (int N : Ns) cols.push_back(decomp::approx_derivative(k, ef.fn, spec, grid_x, N));

    OutputTarget out(out_path);
    out.stream() << "x,exact";
    for (int N : Ns) out.stream() << ",approx_N" << N;
    out.stream() << "\n";
    for (size_t i = 0; i < grid_x.size(); ++i) {
        auto e = ef.exact(grid_x[i]);
        out.stream() << format_double(grid_x[i]) << ','
                     << (e ? format_double(*e) : std::string());
        for (size_t c = 0; c < cols.size(); ++c) out.stream() << ',' << format_double(cols[c][i]);
        out.stream() << "\n";
    }
    return 0;
}

int cmd_solve(const std::string& kernel_spec, double alpha, double a, double b, int N,
              int steps, double f0, const std::string& rhs_name, double lambda,
              const std::string& out_path) {
    Kernel k = parse_kernel(kernel_spec);
    Interval iv(a, b);
    validate_or_throw(k, iv);
    std::function<double(double, double)> rhs;
    if (rhs_name == "fig4") {
        const double c = 2.0 / special::gamma(2.5);
        rhs = [c](double x, double f) {
            double l = std::log1p(x);
            return c * std::pow(l, 1.5) + l * l - f;
        };
    } else if (rhs_name == "linear") {
        rhs = [lambda](double, double f) { return lambda * f; };
    } else {
        throw std::invalid_argument("unknown --rhs '" + rhs_name + "' (expected fig4 or linear)");
    }
    fde::CauchyProblem problem{k, alpha, iv, rhs, f0};
    fde::Trajectory tr = fde::solve(problem, N, steps);
    OutputTarget out(out_path);
    tr.write_csv(out.stream());
    return 0;
}

fit::ModelSpec build_model(const std::string& family, const std::string& kernel_spec,
                           const std::vector<std::string>& free_extra,
                           std::map<std::string, double>& init) {
    fit::ModelSpec model;
    if (family == "classical") {
        model.family = fit::Family::classical;
        model.free = {"lambda"};
    } else if (family == "fractional") {
        model.family = fit::Family::fractional;
        Kernel k = parse_kernel(kernel_spec);
        model.kernel_name = k.name();
        model.free = {"lambda", "alpha"};
        for (const auto& [key, val] : k.params())
            if (key == "b") {
                model.fixed["b"] = val;
                init["b"] = val;
            }
        for (const auto& f : free_extra) {
            model.free.insert(f);
            model.fixed.erase(f);
        }
        if (model.kernel_name == "pow1p" && !model.fixed.count("b") && !init.count("b"))
            init["b"] = 1.0;
    } else {
        throw std::invalid_argument("--family must be 'classical' or 'fractional'");
    }
    return model;
}

void validate_fit_kernel(const fit::ModelSpec& model, const fit::Dataset& data,
                         double horizon) {
    if (model.family != fit::Family::fractional) return;
    if (model.free.count("b")) return;  // admissible for every b > 0 on t >= 0
    fit::Params p = fit::params_from(model.fixed);
    Kernel k = model.kernel_name == "pow1p" ? builtin_kernel("pow1p", {{"b", p.b}})
                                            : builtin_kernel(model.kernel_name);
    double hi = std::max(data.times.back(), horizon);
    validate_or_throw(k, Interval(0.0, hi));
}

void write_fit_row(std::ostream& os, const std::string& family, const fit::ModelSpec& model,
                   const fit::FitResult& res) {
    os << "family,kernel,lambda,alpha,b,sse,converged\n";
    os << family << ',' << (model.family == fit::Family::classical ? "linear" : model.kernel_name)
       << ',' << format_double(res.params.lambda) << ',' << format_double(res.params.alpha)
       << ',' << (model.kernel_name == "pow1p" ? format_double(res.params.b) : std::string())
       << ',' << format_double(res.sse) << ',' << (res.converged ? "true" : "false") << "\n";
}

int cmd_fit(const std::string& data_path, const std::string& family,
            const std::string& kernel_spec, const std::vector<std::string>& free_extra,
            double time_unit, const std::string& out_path) {
    std::map<std::string, double> init;
    fit::ModelSpec model = build_model(family, kernel_spec, free_extra, init);
    fit::Dataset data = fit::load_csv(data_path, time_unit);
    validate_fit_kernel(model, data, 0.0);
    fit::FitResult res = fit::fit(model, data, init);
    OutputTarget out(out_path);
    write_fit_row(out.stream(), family, model, res);
    return 0;
}

int cmd_project(const std::string& data_path, const std::string& family,
                const std::string& kernel_spec, const std::vector<std::string>& free_extra,
                double time_unit, double t_star, double observed,
                const std::string& out_path) {
    std::map<std::string, double> init;
    fit::ModelSpec model = build_model(family, kernel_spec, free_extra, init);
    fit::Dataset data = fit::load_csv(data_path, time_unit);
    validate_fit_kernel(model, data, t_star);
    fit::FitResult res = fit::fit(model, data, init);
    fit::Params p = res.params;
    double projected = fit::predict(model, p, t_star);
    double err = fit::projection_error(model, p, t_star, observed);
    OutputTarget out(out_path);
    out.stream() << "family,kernel,t,projected,observed,error_percent\n";
    out.stream() << family << ','
                 << (model.family == fit::Family::classical ? "linear" : model.kernel_name) << ','
                 << format_double(t_star) << ',' << format_double(projected) << ','
                 << format_double(observed) << ',' << format_double(err) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"psifrac: psi-Caputo fractional-calculus engine"};
    app.require_subcommand(1);

    std::string kernel_spec = "linear", fn_name = "pow2", out_path, data_path;
    std::string family = "classical", rhs_name = "fig4";
    std::vector<std::string> free_extra;
    double alpha = 0.5, a = 0.0, b = 5.0, f0 = 0.0, lambda = 1.0;
    double time_unit = 10.0, t_star = 0.0, observed = 0.0;
    int grid = 101, steps = 5000, N_single = 6;
    std::vector<int> N_list;

    auto* eval = app.add_subcommand("eval", "Evaluate a psi-Caputo derivative on a grid");
    eval->add_option("--kernel", kernel_spec, "Kernel spec, name[:b=<val>]");
    eval->add_option("--alpha", alpha, "Fractional order");
    eval->add_option("--a", a, "Interval start (base point)");
    eval->add_option("--b", b, "Interval end");
    eval->add_option("--grid", grid, "Grid size");
    eval->add_option("--fn", fn_name, "Function: pow2, mlexp, ln2p1, parab");
    eval->add_option("--out", out_path, "Output CSV path (default stdout)");

    auto* approx = app.add_subcommand("approx", "Series-decomposition approximation");
    approx->add_option("--kernel", kernel_spec, "Kernel spec")->default_val("log1p");
    approx->add_option("--alpha", alpha, "Fractional order");
    approx->add_option("--a", a, "Interval start");
    approx->add_option("--b", b, "Interval end");
    approx->add_option("--grid", grid, "Grid size");
    approx->add_option("--fn", fn_name, "Function selector")->default_val("ln2p1");
    approx->add_option("--N", N_list, "Truncation orders (repeatable)");
    approx->add_option("--out", out_path, "Output CSV path (default stdout)");

    auto* solve = app.add_subcommand("solve", "Solve a Caputo initial-value problem");
    solve->add_option("--kernel", kernel_spec, "Kernel spec")->default_val("log1p");
    solve->add_option("--alpha", alpha, "Fractional order in (0,1)");
    solve->add_option("--a", a, "Interval start");
    solve->add_option("--b", b, "Interval end");
    solve->add_option("--N", N_single, "Decomposition truncation");
    solve->add_option("--steps", steps, "RK4 step count");
    solve->add_option("--f0", f0, "Initial value f(a)")->required();
    solve->add_option("--rhs", rhs_name, "Right-hand side: fig4 or linear");
    solve->add_option("--lambda", lambda, "lambda for --rhs linear");
    solve->add_option("--out", out_path, "Output CSV path (default stdout)");

    auto* fitc = app.add_subcommand("fit", "Least-squares population fit");
    fitc->add_option("--data", data_path, "Dataset CSV (year,population)")->required();
    fitc->add_option("--family", family, "classical or fractional");
    fitc->add_option("--kernel", kernel_spec, "Kernel spec (fractional)");
    fitc->add_option("--free", free_extra, "Additional free parameters (e.g. b)");
    fitc->add_option("--time-unit", time_unit, "Years per model time unit");
    fitc->add_option("--out", out_path, "Output CSV path (default stdout)");

    auto* project = app.add_subcommand("project", "Fit, then project to a future time");
    project->add_option("--data", data_path, "Dataset CSV")->required();
    project->add_option("--family", family, "classical or fractional");
    project->add_option("--kernel", kernel_spec, "Kernel spec (fractional)");
    project->add_option("--free", free_extra, "Additional free parameters");
    project->add_option("--time-unit", time_unit, "Years per model time unit");
    project->add_option("--t", t_star, "Projection time (model units)")->required();
    project->add_option("--observed", observed, "Observed value at --t")->required();
    project->add_option("--out", out_path, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) return cmd_eval(kernel_spec, alpha, a, b, grid, fn_name, out_path);
        if (approx->parsed())
            return cmd_approx(kernel_spec, alpha, a, b, grid, fn_name, N_list, out_path);
        if (solve->parsed())
            return cmd_solve(kernel_spec, alpha, a, b, N_single, steps, f0, rhs_name, lambda,
                             out_path);
        if (fitc->parsed())
            return cmd_fit(data_path, family, kernel_spec, free_extra, time_unit, out_path);
        if (project->parsed())
            return cmd_project(data_path, family, kernel_spec, free_extra, time_unit, t_star,
                               observed, out_path);
    } catch (const psifrac::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
