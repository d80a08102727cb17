// Test-only reference implementations, independent of the library's
// quadrature/series paths: adaptive Simpson, a weakly singular integral
// oracle with a Taylor-corrected endpoint tail, and a plain long-double
// Mittag-Leffler series.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace oracles {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 48) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// integral_lo^hi F(v) (hi - v)^g dv for F smooth and g > -1: adaptive Simpson
// away from the singular endpoint plus a three-term Taylor tail on the last
// eps of the range.
inline double singular_upper(const std::function<double(double)>& F, double lo, double hi,
                             double g, double tol = 1e-12) {
    double span = hi - lo;
    if (span == 0.0) return 0.0;
    double eps = 1e-4 * span;
    auto integrand = [&](double v) { return F(v) * std::pow(hi - v, g); };
    double body = adaptive_simpson(integrand, lo, hi - eps, tol);
    // one-sided first/second differences pointing into the domain
    double h = eps / 8.0;
    double F0 = F(hi);
    double fm1 = F(hi - h), fm2 = F(hi - 2.0 * h);
    double F1 = (3.0 * F0 - 4.0 * fm1 + fm2) / (2.0 * h);
    double F2 = (F0 - 2.0 * fm1 + fm2) / (h * h);
    double tail = F0 * std::pow(eps, g + 1.0) / (g + 1.0) -
                  F1 * std::pow(eps, g + 2.0) / (g + 2.0) +
                  0.5 * F2 * std::pow(eps, g + 3.0) / (g + 3.0);
    return body + tail;
}

// E_alpha(z) by plain long-double term recursion (no compensation, no log
// tricks): an en independent check for moderate arguments.
inline double ml_reference(double alpha, double z, int terms = 400) {
    long double sum = 0.0L;
    for (int k = 0; k < terms; ++k) {
        long double t = std::exp((long double)k * std::log(std::fabs((long double)z)) -
                                 std::lgamma((long double)(alpha * k + 1.0)));
        if (z < 0.0 && (k % 2 == 1)) t = -t;
        if (z == 0.0) t = (k == 0) ? 1.0L : 0.0L;
        sum += t;
        if (std::fabs((double)t) < 1e-19 && k > 4) break;
    }
    return (double)sum;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20230517u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

}  // namespace oracles
