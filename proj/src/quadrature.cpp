#include "psifrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "psifrac/errors.hpp"
#include "psifrac/special_functions.hpp"

namespace psifrac::quad {

namespace {

// Symmetric tridiagonal QL with implicit shifts, tracking only the first row
// of the eigenvector matrix (all that Golub-Welsch needs).
void tql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw numeric_error("gauss_jacobi01: eigensolver stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

Rule make_jacobi01(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi01: requires n >= 1");
    if (!(a > -1.0) || !(b > -1.0))
        throw std::invalid_argument("gauss_jacobi01: weight exponents must be > -1");

    // Monic Jacobi recurrence coefficients on [-1,1] (Gautschi).
    std::vector<double> d(n), e(n, 0.0), z(n, 0.0);
    const double ab = a + b;
    d[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double s = 2.0 * k + ab;
        d[k] = (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double bk;
        if (k == 1) {
            bk = 4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            double s = 2.0 * k + ab;
            bk = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        e[k] = std::sqrt(bk);
    }
    z[0] = 1.0;
    tql_first_row(d, e, z);

    const double mu0 = std::pow(2.0, ab + 1.0) * special::beta(a + 1.0, b + 1.0);
    std::vector<std::pair<double, double>> nw(n);
    for (int i = 0; i < n; ++i) nw[i] = {d[i], mu0 * z[i] * z[i]};
    std::sort(nw.begin(), nw.end());

    // Map to [0,1]: x = 2u-1, weight scale 2^-(a+b+1).
    Rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double wscale = std::pow(2.0, -(ab + 1.0));
    for (int i = 0; i < n; ++i) {
        rule.x[i] = 0.5 * (nw[i].first + 1.0);
        rule.w[i] = nw[i].second * wscale;
    }
    return rule;
}

uint64_t bits(double v) {
    uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return u;
}

}  // namespace

const Rule& gauss_jacobi01(int n, double a, double b) {
    static std::mutex mtx;
    static std::map<std::tuple<int, uint64_t, uint64_t>, Rule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(n, bits(a), bits(b));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_jacobi01(n, a, b)).first;
    return it->second;
}

double gauss_legendre(const std::function<double(double)>& f, double lo, double hi, int n) {
    const Rule& r = gauss_jacobi01(n, 0.0, 0.0);
    const double len = hi - lo;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(lo + len * r.x[i]);
    return s * len;
}

namespace {

double panels_value(double a, double b, const std::function<double(double)>& g,
                    int nodes, int P) {
    if (P == 1) {
        const Rule& r = gauss_jacobi01(nodes, a, b);
        double s = 0.0;
        for (int i = 0; i < nodes; ++i) s += r.w[i] * g(r.x[i]);
        return s;
    }
    const double L = 1.0 / P;
    double total = 0.0;
    // left panel [0,L]: weight u^b, (1-u)^a regular
    {
        const Rule& r = gauss_jacobi01(nodes, 0.0, b);
        double s = 0.0;
        for (int i = 0; i < nodes; ++i) {
            double u = L * r.x[i];
            s += r.w[i] * std::pow(1.0 - u, a) * g(u);
        }
        total += std::pow(L, b + 1.0) * s;
    }
    // interior panels: both weight factors regular
    for (int j = 1; j < P - 1; ++j) {
        const Rule& r = gauss_jacobi01(nodes, 0.0, 0.0);
        double lo = j * L;
        double s = 0.0;
        for (int i = 0; i < nodes; ++i) {
            double u = lo + L * r.x[i];
            s += r.w[i] * std::pow(1.0 - u, a) * std::pow(u, b) * g(u);
        }
        total += L * s;
    }
    // right panel [1-L,1]: weight (1-u)^a, u^b regular
    {
        const Rule& r = gauss_jacobi01(nodes, a, 0.0);
        double s = 0.0;
        for (int i = 0; i < nodes; ++i) {
            double u = 1.0 - L * (1.0 - r.x[i]);
            s += r.w[i] * std::pow(u, b) * g(u);
        }
        total += std::pow(L, a + 1.0) * s;
    }
    return total;
}

}  // namespace

double weighted_integral01(double a, double b, const std::function<double(double)>& g,
                           const QuadConfig& cfg) {
    if (cfg.nodes < 2 || cfg.refinement < 1)
        throw std::invalid_argument("weighted_integral01: invalid QuadConfig");
    if (!(a > -1.0) || !(b > -1.0))
        throw std::invalid_argument("weighted_integral01: weight exponents must be > -1");
    double v1 = panels_value(a, b, g, cfg.nodes, cfg.refinement);
    double v2 = panels_value(a, b, g, cfg.nodes, 2 * cfg.refinement);
    if (!(std::fabs(v2 - v1) <= 1e-9 * (1.0 + std::fabs(v2))))
        throw numeric_error("weighted_integral01: refinement levels disagree");
    return v2;
}

}  // namespace psifrac::quad
