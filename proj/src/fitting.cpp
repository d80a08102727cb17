#include "psifrac/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "psifrac/errors.hpp"
#include "psifrac/special_functions.hpp"

namespace psifrac::fit {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& what, int line_no) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size() || s.empty()) {
        std::ostringstream os;
        os << "load_csv: malformed " << what << " '" << s << "' at line " << line_no;
        throw std::invalid_argument(os.str());
    }
    return v;
}

}  // namespace

Dataset load_csv(const std::string& path, double time_unit_years) {
    if (!(time_unit_years > 0.0))
        throw std::invalid_argument("load_csv: time unit must be positive");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "year,population")
        throw std::invalid_argument("load_csv: expected header 'year,population' in '" + path + "'");

    Dataset d;
    d.time_unit_years = time_unit_years;
    std::vector<double> years;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto comma = t.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("load_csv: missing comma at line " + std::to_string(line_no));
        double year = parse_number(trim(t.substr(0, comma)), "year", line_no);
        double pop = parse_number(trim(t.substr(comma + 1)), "population", line_no);
        if (!years.empty() && !(year > years.back()))
            throw std::invalid_argument("load_csv: years must be strictly ascending (line " +
                                        std::to_string(line_no) + ")");
        if (!(pop > 0.0))
            throw std::invalid_argument("load_csv: population must be positive (line " +
                                        std::to_string(line_no) + ")");
        years.push_back(year);
        d.values.push_back(pop);
    }
    if (years.size() < 2) throw std::invalid_argument("load_csv: need at least 2 rows");
    d.base_year = static_cast<int>(years.front());
    d.times.resize(years.size());
    for (size_t i = 0; i < years.size(); ++i)
        d.times[i] = (years[i] - years.front()) / time_unit_years;
    return d;
}

void ModelSpec::validate() const {
    static const std::set<std::string> known{"lambda", "alpha", "b"};
    for (const auto& f : free)
        if (!known.count(f))
            throw std::invalid_argument("ModelSpec: unknown free parameter '" + f + "'");
    if (family == Family::classical) {
        if (free.count("alpha") || free.count("b"))
            throw std::invalid_argument("ModelSpec: classical family fits lambda only");
    } else {
        if (free.count("b") && kernel_name != "pow1p")
            throw std::invalid_argument("ModelSpec: b is only free for the pow1p kernel");
        if (kernel_name == "pow1p" && !free.count("b") && !fixed.count("b"))
            throw std::invalid_argument("ModelSpec: pow1p requires b (free or fixed)");
    }
}

Params params_from(const std::map<std::string, double>& named) {
    Params p;
    for (const auto& [k, v] : named) {
        if (k == "lambda") p.lambda = v;
        else if (k == "alpha") p.alpha = v;
        else if (k == "b") p.b = v;
        else if (k == "n0") p.n0 = v;
        else throw std::invalid_argument("params_from: unknown parameter '" + k + "'");
    }
    return p;
}

namespace {

Kernel model_kernel(const ModelSpec& model, const Params& p) {
    if (model.kernel_name == "pow1p") return builtin_kernel("pow1p", {{"b", p.b}});
    return builtin_kernel(model.kernel_name);
}

double predict_with_kernel(const ModelSpec& model, const Kernel* k, const Params& p,
                           double t) {
    if (!(p.n0 > 0.0)) throw std::invalid_argument("predict: requires N0 > 0");
    if (model.family == Family::classical) return p.n0 * std::exp(p.lambda * t);
    double d = k->psi(t) - k->psi(0.0);
    if (d < 0.0) throw std::invalid_argument("predict: psi must not decrease past psi(0)");
    return p.n0 * special::mittag_leffler(p.alpha, p.lambda * std::pow(d, p.alpha));
}

Params resolved(const ModelSpec& model, Params p, const Dataset& data) {
    if (model.n0_policy == ModelSpec::N0Policy::first_datum) p.n0 = data.values.front();
    for (const auto& [k, v] : model.fixed) {
        if (k == "lambda" && !model.free.count(k)) p.lambda = v;
        else if (k == "alpha" && !model.free.count(k)) p.alpha = v;
        else if (k == "b" && !model.free.count(k)) p.b = v;
    }
    if (model.family == Family::classical) p.alpha = 1.0;
    return p;
}

struct Bound {
    double lo, hi;
};

Bound bound_of(const std::string& name) {
    if (name == "lambda") return {1e-8, 100.0};
    if (name == "alpha") return {1e-6, 10.0};
    if (name == "b") return {1e-6, 5.0};
    return {1e-6, 1e7};  // n0
}

// Gaussian elimination with partial pivoting for the (<=4)-dim normal system.
bool solve_dense(std::vector<std::vector<double>>& A, std::vector<double>& rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
        if (std::fabs(A[piv][c]) < 1e-300) return false;
        std::swap(A[c], A[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (int r = c + 1; r < n; ++r) {
            double f = A[r][c] / A[c][c];
            for (int cc = c; cc < n; ++cc) A[r][cc] -= f * A[c][cc];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        double s = rhs[c];
        for (int cc = c + 1; cc < n; ++cc) s -= A[c][cc] * rhs[cc];
        rhs[c] = s / A[c][c];
    }
    return true;
}

struct LMRun {
    std::vector<double> theta;
    double sse = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;
};

}  // namespace

double predict(const ModelSpec& model, const Params& p, double t) {
    model.validate();
    if (model.family == Family::classical) return predict_with_kernel(model, nullptr, p, t);
    Kernel k = model_kernel(model, p);
    return predict_with_kernel(model, &k, p, t);
}

double sse(const ModelSpec& model, const Params& p, const Dataset& data) {
    model.validate();
    Params rp = resolved(model, p, data);
    std::optional<Kernel> k;
    if (model.family == Family::fractional) k.emplace(model_kernel(model, rp));
    double s = 0.0;
    for (size_t i = 0; i < data.times.size(); ++i) {
        double r = predict_with_kernel(model, k ? &*k : nullptr, rp, data.times[i]) -
                   data.values[i];
        s += r * r;
    }
    return s;
}

FitResult fit(const ModelSpec& model, const Dataset& data,
              const std::map<std::string, double>& init, const FitOptions& opts) {
    model.validate();
    if (data.times.size() != data.values.size() || data.times.size() < 2)
        throw std::invalid_argument("fit: dataset must have >= 2 aligned points");

    std::vector<std::string> names;
    for (const char* cand : {"lambda", "alpha", "b"})
        if (model.free.count(cand) ||
            (std::string(cand) == "lambda" && model.free.empty()))
            names.push_back(cand);
    if (model.free.count("lambda") == 0 && !model.free.empty())
        throw std::invalid_argument("fit: lambda must be free");
    if (model.n0_policy == ModelSpec::N0Policy::free) names.push_back("n0");
    const int p = static_cast<int>(names.size());
    const int m = static_cast<int>(data.times.size());

    Params base = resolved(model, params_from(init), data);

    auto theta_to_params = [&](const std::vector<double>& th) {
        Params out = base;
        for (int j = 0; j < p; ++j) {
            if (names[j] == "lambda") out.lambda = th[j];
            else if (names[j] == "alpha") out.alpha = th[j];
            else if (names[j] == "b") out.b = th[j];
            else out.n0 = th[j];
        }
        return out;
    };

    auto clamp = [&](std::vector<double> th) {
        for (int j = 0; j < p; ++j) {
            Bound b = bound_of(names[j]);
            th[j] = std::min(std::max(th[j], b.lo), b.hi);
        }
        return th;
    };

    auto residuals_at = [&](const std::vector<double>& th,
                            std::vector<double>& out) -> double {
        Params pp = theta_to_params(th);
        std::optional<Kernel> k;
        try {
            if (model.family == Family::fractional) k.emplace(model_kernel(model, pp));
            double s = 0.0;
            out.resize(m);
            for (int i = 0; i < m; ++i) {
                double r = predict_with_kernel(model, k ? &*k : nullptr, pp, data.times[i]) -
                           data.values[i];
                if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
                out[i] = r;
                s += r * r;
            }
            return s;
        } catch (const numeric_error&) {
            return std::numeric_limits<double>::infinity();
        } catch (const std::domain_error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    auto run_lm = [&](std::vector<double> theta) {
        LMRun run;
        theta = clamp(std::move(theta));
        std::vector<double> r;
        double S = residuals_at(theta, r);
        run.theta = theta;
        run.sse = S;
        run.residuals = r;
        if (!std::isfinite(S)) return run;

        double mu = 1e-3;
        std::vector<double> rp, rt;
        for (int it = 1; it <= opts.max_iter; ++it) {
            run.iterations = it;
            // forward-difference Jacobian, relative step 1e-6
            std::vector<std::vector<double>> J(m, std::vector<double>(p));
            bool jac_ok = true;
            for (int j = 0; j < p && jac_ok; ++j) {
                double dj = 1e-6 * std::max(std::fabs(theta[j]), 1e-8);
                auto tp = theta;
                tp[j] += dj;
                double Sp = residuals_at(tp, rp);
                if (!std::isfinite(Sp)) {
                    tp[j] = theta[j] - dj;  // one-sided fallback at a bound
                    Sp = residuals_at(tp, rp);
                    dj = -dj;
                    if (!std::isfinite(Sp)) jac_ok = false;
                }
                if (jac_ok)
                    for (int i = 0; i < m; ++i) J[i][j] = (rp[i] - r[i]) / dj;
            }
            if (!jac_ok) break;

            std::vector<std::vector<double>> A(p, std::vector<double>(p, 0.0));
            std::vector<double> g(p, 0.0);
            for (int i = 0; i < m; ++i)
                for (int a = 0; a < p; ++a) {
                    for (int b2 = a; b2 < p; ++b2) A[a][b2] += J[i][a] * J[i][b2];
                    g[a] += J[i][a] * r[i];
                }
            for (int a = 0; a < p; ++a)
                for (int b2 = 0; b2 < a; ++b2) A[a][b2] = A[b2][a];

            bool accepted = false;
            for (int tries = 0; tries < 60 && !accepted; ++tries) {
                auto M = A;
                for (int a = 0; a < p; ++a) M[a][a] += mu * A[a][a];
                std::vector<double> d(p);
                for (int a = 0; a < p; ++a) d[a] = -g[a];
                if (!solve_dense(M, d)) {
                    mu *= 10.0;
                    continue;
                }
                auto trial = theta;
                for (int a = 0; a < p; ++a) trial[a] += d[a];
                trial = clamp(std::move(trial));
                double St = residuals_at(trial, rt);
                if (St < S) {
                    double step2 = 0.0;
                    for (int a = 0; a < p; ++a) {
                        double dd = trial[a] - theta[a];
                        step2 += dd * dd;
                    }
                    double rel = (S - St) / std::max(S, 1e-300);
                    theta = trial;
                    S = St;
                    r.swap(rt);
                    mu = std::max(mu / 10.0, 1e-12);
                    accepted = true;
                    if (rel < 1e-10 || std::sqrt(step2) < 1e-10) run.converged = true;
                } else {
                    mu *= 10.0;
                    if (mu > 1e14) break;
                }
            }
            run.theta = theta;
            run.sse = S;
            run.residuals = r;
            if (!accepted || run.converged) {
                if (!accepted) run.converged = true;  // no descent direction left
                break;
            }
        }
        return run;
    };

    // start list: caller's init first, then the lattice over the free dims
    std::vector<std::vector<double>> starts;
    {
        std::vector<double> th(p);
        for (int j = 0; j < p; ++j) {
            if (names[j] == "lambda") th[j] = base.lambda > 0.0 ? base.lambda : 0.1;
            else if (names[j] == "alpha") th[j] = base.alpha > 0.0 ? base.alpha : 1.4;
            else if (names[j] == "b") th[j] = base.b > 0.0 ? base.b : 1.0;
            else th[j] = base.n0 > 0.0 ? base.n0 : data.values.front();
        }
        starts.push_back(th);
        if (opts.multistart) {
            static const double lams[] = {0.05, 0.1, 0.5, 1.0, 3.0, 5.0};
            static const double alphas[] = {0.8, 1.4, 2.0, 4.0};
            int j_lam = -1, j_alpha = -1;
            for (int j = 0; j < p; ++j) {
                if (names[j] == "lambda") j_lam = j;
                if (names[j] == "alpha") j_alpha = j;
            }
            for (double lv : lams) {
                if (j_alpha >= 0) {
                    for (double av : alphas) {
                        auto s = th;
                        s[j_lam] = lv;
                        s[j_alpha] = av;
                        starts.push_back(s);
                    }
                } else if (j_lam >= 0) {
                    auto s = th;
                    s[j_lam] = lv;
                    starts.push_back(s);
                }
            }
        }
    }

    LMRun best;
    int best_idx = -1;
    for (size_t i = 0; i < starts.size(); ++i) {
        LMRun run = run_lm(starts[i]);
        if (best_idx < 0 || run.sse < best.sse) {
            best = std::move(run);
            best_idx = static_cast<int>(i);
        }
    }

    FitResult out;
    out.params = theta_to_params(best.theta);
    out.sse = best.sse;
    out.iterations = best.iterations;
    out.converged = best.converged;
    out.residuals = std::move(best.residuals);
    return out;
}

double projection_error(const ModelSpec& model, const Params& p, double t_star,
                        double observed) {
    if (!(observed > 0.0)) throw std::invalid_argument("projection_error: observed must be > 0");
    return std::fabs(predict(model, p, t_star) - observed) / observed * 100.0;
}

}  // namespace psifrac::fit
