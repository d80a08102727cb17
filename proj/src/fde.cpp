#include "psifrac/fde.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "psifrac/csv.hpp"
#include "psifrac/errors.hpp"

namespace psifrac::fde {

AssembledSystem::AssembledSystem(const CauchyProblem& p, int N)
    : problem_(p), N_(N), coeffs_(decomp::coefficients(p.alpha, N)) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw std::domain_error("fde: solver requires alpha in (0,1)");
    if (!p.rhs) throw std::invalid_argument("fde: null right-hand side");
    if (!(std::fabs(coeffs_.A_N) > 1e-300))
        throw numeric_error("fde: decomposition coefficient A_N vanished");
}

std::vector<double> AssembledSystem::initial_state() const {
    std::vector<double> s(dimension(), 0.0);
    s[0] = problem_.f0;
    return s;
}

void AssembledSystem::eval(double x, std::span<const double> state,
                           std::span<double> dstate) const {
    const Kernel& k = problem_.kernel;
    const double alpha = problem_.alpha;
    const double d = k.gap(x, problem_.interval.a);
    double g = problem_.rhs(x, state[0]);
    double sum = g;
    if (d >= 1e-12) {
        for (int kk = 1; kk <= N_; ++kk)
            sum += coeffs_.B[kk - 1] * std::pow(d, 1.0 - alpha - kk) * state[kk];
    }
    double fp = k.dpsi(x) * sum / (coeffs_.A_N * std::pow(d, 1.0 - alpha));
    dstate[0] = fp;
    double dk = 1.0;
    for (int kk = 1; kk <= N_; ++kk) {
        dstate[kk] = kk * dk * fp;
        dk *= d;
    }
}

AssembledSystem assemble(const CauchyProblem& p, int N) {
    if (N < 1) throw std::invalid_argument("fde: requires N >= 1");
    return AssembledSystem(p, N);
}

Trajectory solve(const CauchyProblem& p, int N, int steps) {
    if (steps < 10) throw std::invalid_argument("fde: requires steps >= 10");
    AssembledSystem sys = assemble(p, N);
    const double a = p.interval.a;
    const double h = p.interval.width() / steps;
    const int dim = sys.dimension();

    Trajectory tr;
    tr.N = N;
    tr.step = h;
    tr.x.reserve(steps + 1);
    tr.f.reserve(steps + 1);
    tr.V.reserve(steps + 1);

    std::vector<double> y = sys.initial_state();
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    auto record = [&](double x) {
        tr.x.push_back(x);
        tr.f.push_back(y[0]);
        tr.V.emplace_back(y.begin() + 1, y.end());
    };
    // startup: stage evaluations at the left endpoint are offset by h/100
    auto stage_x = [&](double x) { return x <= a ? a + h / 100.0 : x; };

    record(a);
    for (int i = 0; i < steps; ++i) {
        double x = a + i * h;
        sys.eval(stage_x(x), y, k1);
        for (int j = 0; j < dim; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
        sys.eval(stage_x(x + 0.5 * h), tmp, k2);
        for (int j = 0; j < dim; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
        sys.eval(stage_x(x + 0.5 * h), tmp, k3);
        for (int j = 0; j < dim; ++j) tmp[j] = y[j] + h * k3[j];
        sys.eval(stage_x(x + h), tmp, k4);
        for (int j = 0; j < dim; ++j)
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        for (int j = 0; j < dim; ++j) {
            if (!std::isfinite(y[j])) {
                std::ostringstream os;
                os << "fde: state became non-finite at x = " << x + h;
                throw numeric_error(os.str());
            }
        }
        record(x + h);
    }
    return tr;
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "x,f";
    for (int k = 1; k <= N; ++k) os << ",V" << k;
    os << "\n";
    for (size_t i = 0; i < x.size(); ++i) {
        os << format_double(x[i]) << ',' << format_double(f[i]);
        for (int k = 0; k < N; ++k) os << ',' << format_double(V[i][k]);
        os << "\n";
    }
}

double analytic_linear(const Kernel& k, double alpha, double lambda, double N0,
                       double t, const special::MLConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("analytic_linear: requires alpha > 0");
    double d = k.gap(t, 0.0);
    if (d < 0.0) throw std::invalid_argument("analytic_linear: requires psi(t) >= psi(0)");
    return N0 * special::mittag_leffler(alpha, lambda * std::pow(d, alpha), cfg);
}

}  // namespace psifrac::fde
