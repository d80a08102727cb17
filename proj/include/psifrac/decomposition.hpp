#pragma once

#include <span>
#include <vector>

#include "psifrac/kernels.hpp"
#include "psifrac/operators.hpp"
#include "psifrac/smooth_fn.hpp"

namespace psifrac::decomp {

// Truncation coefficients of the series decomposition:
//   A_N = (1/Gamma(n-alpha+1)) [1 + sum_{k=1..N} (-1)^k C(n-alpha,k)]
//   B_k = ((-1)^k/Gamma(n-alpha+1)) C(n-alpha,k)
// Both denominators follow the theorem statement, Gamma(n-alpha+1).
struct Coefficients {
    double alpha;
    int n;
    int N;
    double A_N;
    std::vector<double> B;  // B[k-1] = B_k, k = 1..N
};

// Requires non-integer alpha > 0, N >= 1.
Coefficients coefficients(double alpha, int N);

struct MomentState {
    double x;
    std::vector<double> V;  // V[k-1] = V_k(x) (or W_k on the right side)
};

// Cumulative moments V_k(x) = int_base^x k psi'(t)(psi(t)-psi(base))^{k-1}
// f^[n]_psi(t) dt along an ascending grid whose first (left) or last (right)
// point is the base; composite Gauss-Legendre, 8 nodes per grid cell.
// On the right side the integrand carries the (-1)^n factor (W_k).
std::vector<MomentState> moments(const Kernel& k, const SmoothFn& fn, ops::Side side,
                                 double base, std::span<const double> x_grid, int N, int n);

// Truncated decomposition of the psi-Caputo derivative on the grid:
//   A_N d^{n-alpha} f^[n]_psi(x) - sum_k B_k d^{n-alpha-k} V_k(x)
// with d = psi(x)-psi(base) (right side mirrored, (-1)^n and W_k).
// Terms with d < 1e-12 are taken as 0 (continuous limit at the base).
std::vector<double> approx_derivative(const Kernel& k, const SmoothFn& fn,
                                      const ops::DerivativeSpec& spec,
                                      std::span<const double> x_grid, int N);

// Theorem error bound, decreasing in N:
//   M d^{n-alpha} (x-a) exp((n-alpha)^2+(n-alpha)) / ((n-alpha) Gamma(n-alpha+1) N^{n-alpha})
// M = max over [a,x] of |d/dt f^[n]_psi(t)|, supplied by the caller.
double error_bound(double M, const Kernel& k, double alpha, int n, double base,
                   double x, int N);

}  // namespace psifrac::decomp
