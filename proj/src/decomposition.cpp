#include "psifrac/decomposition.hpp"

#include <cmath>
#include <stdexcept>

#include "psifrac/quadrature.hpp"
#include "psifrac/special_functions.hpp"

namespace psifrac::decomp {

Coefficients coefficients(double alpha, int N) {
    if (!(alpha > 0.0) || alpha == std::floor(alpha))
        throw std::domain_error("decomposition: requires non-integer alpha > 0");
    if (N < 1) throw std::invalid_argument("decomposition: requires N >= 1");
    const int n = static_cast<int>(std::floor(alpha)) + 1;
    const double g = special::gamma(n - alpha + 1.0);
    Coefficients c{alpha, n, N, 0.0, {}};
    c.B.resize(N);
    double acc = 1.0;
    for (int k = 1; k <= N; ++k) {
        double term = special::gen_binomial(n - alpha, k);
        double sk = (k % 2 == 1) ? -1.0 : 1.0;
        c.B[k - 1] = sk * term / g;
        acc += sk * term;
    }
    c.A_N = acc / g;
    return c;
}

std::vector<MomentState> moments(const Kernel& k, const SmoothFn& fn, ops::Side side,
                                 double base, std::span<const double> x_grid, int N, int n) {
    if (N < 1 || n < 1) throw std::invalid_argument("moments: requires N, n >= 1");
    if (x_grid.size() < 1) throw std::invalid_argument("moments: empty grid");
    for (size_t i = 1; i < x_grid.size(); ++i)
        if (!(x_grid[i] > x_grid[i - 1]))
            throw std::invalid_argument("moments: grid must be strictly ascending");
    const bool left = side == ops::Side::left;
    if (left ? x_grid.front() != base : x_grid.back() != base)
        throw std::invalid_argument("moments: grid must start at the base point");

    const double rsign = (!left && (n & 1)) ? -1.0 : 1.0;
    const int m = static_cast<int>(x_grid.size());
    std::vector<MomentState> out(m);
    for (int i = 0; i < m; ++i) {
        out[i].x = x_grid[i];
        out[i].V.assign(N, 0.0);
    }
    const auto& rule = quad::gauss_jacobi01(8, 0.0, 0.0);

    // March away from the base, accumulating each cell with one shared pass
    // over the f^[n] evaluations.
    const int start = left ? 0 : m - 1;
    const int step = left ? 1 : -1;
    std::vector<double> acc(N, 0.0);
    for (int i = start; left ? i < m - 1 : i > 0; i += step) {
        int j = i + step;
        double lo = std::min(x_grid[i], x_grid[j]);
        double hi = std::max(x_grid[i], x_grid[j]);
        double len = hi - lo;
        std::vector<double> cell(N, 0.0);
        for (size_t r = 0; r < rule.x.size(); ++r) {
            double t = lo + len * rule.x[r];
            double w = rule.w[r] * len;
            double fp = ops::psi_weighted_derivative(k, fn, n, t);
            double dp = k.dpsi(t);
            double d = left ? k.gap(t, base) : k.gap(base, t);
            double dk = 1.0;  // d^{kk-1}
            for (int kk = 1; kk <= N; ++kk) {
                cell[kk - 1] += w * kk * dp * dk * fp;
                dk *= d;
            }
        }
        for (int kk = 0; kk < N; ++kk) {
            acc[kk] += rsign * cell[kk];
            out[j].V[kk] = acc[kk];
        }
    }
    return out;
}

std::vector<double> approx_derivative(const Kernel& k, const SmoothFn& fn,
                                      const ops::DerivativeSpec& spec,
                                      std::span<const double> x_grid, int N) {
    Coefficients c = coefficients(spec.alpha, N);
    const int n = c.n;
    auto ms = moments(k, fn, spec.side, spec.base, x_grid, N, n);
    const bool left = spec.side == ops::Side::left;
    const double rsign = (!left && (n & 1)) ? -1.0 : 1.0;

    std::vector<double> out(x_grid.size());
    for (size_t i = 0; i < x_grid.size(); ++i) {
        double x = x_grid[i];
        double d = left ? k.gap(x, spec.base) : k.gap(spec.base, x);
        if (d < 1e-12) {
            out[i] = 0.0;
            continue;
        }
        double fp = ops::psi_weighted_derivative(k, fn, n, x);
        double v = rsign * c.A_N * std::pow(d, n - spec.alpha) * fp;
        for (int kk = 1; kk <= N; ++kk)
            v -= c.B[kk - 1] * std::pow(d, n - spec.alpha - kk) * ms[i].V[kk - 1];
        out[i] = v;
    }
    return out;
}

double error_bound(double M, const Kernel& k, double alpha, int n, double base,
                   double x, int N) {
    if (!(M >= 0.0)) throw std::domain_error("error_bound: requires M >= 0");
    if (N < 1) throw std::invalid_argument("error_bound: requires N >= 1");
    const double na = n - alpha;
    double d = k.gap(x, base);
    return M * std::pow(d, na) * (x - base) * std::exp(na * na + na) /
           (na * special::gamma(na + 1.0) * std::pow(double(N), na));
}

}  // namespace psifrac::decomp
