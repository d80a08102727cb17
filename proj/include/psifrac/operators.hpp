#pragma once

#include "psifrac/kernels.hpp"
#include "psifrac/quadrature.hpp"
#include "psifrac/smooth_fn.hpp"
#include "psifrac/special_functions.hpp"

namespace psifrac::ops {

enum class Side { left, right };

// Order alpha > 0, side, and base point (a for left, b for right).
// n = floor(alpha) + 1 for non-integer alpha, n = alpha for integer alpha.
struct DerivativeSpec {
    double alpha;
    Side side;
    double base;
    int n;

    static DerivativeSpec left(double alpha, double base);
    static DerivativeSpec right(double alpha, double base);
    bool integer_order() const;
};

// f^[order]_psi(x) = ((1/psi') d/dx)^order f(x). Orders 0..3 use the analytic
// quotient-rule expansion when fn carries enough derivatives; otherwise nested
// central differences on the recurrence g_{k+1} = g_k' / psi'.
double psi_weighted_derivative(const Kernel& k, const SmoothFn& fn, int order, double x);

// I^{alpha,psi} f(x), left or right, by the u-substitution
// u = (psi(t)-psi(base))/(psi(x)-psi(base)) and Gauss-Jacobi quadrature with
// weight (1-u)^(alpha-1) u^sigma, sigma taken from fn's singular-power
// annotation. Returns the continuous limit 0 at x = base.
double frac_integral(const Kernel& k, double alpha, Side side, double base,
                     const SmoothFn& fn, double x, const quad::QuadConfig& q = {});

// psi-Caputo derivative. Non-integer alpha evaluates the singular integral of
// f^[n]_psi with the same Gauss-Jacobi scheme (weight exponent n-alpha-1);
// integer alpha returns f^[n]_psi(x) (times (-1)^n on the right side). The
// value at x = base is 0 for non-integer alpha.
double caputo_derivative(const Kernel& k, const DerivativeSpec& spec,
                         const SmoothFn& fn, double x, const quad::QuadConfig& q = {});

// Integration-by-parts form (needs derivatives to order n+1): boundary term
// plus a non-singular integral. Independent evaluation path for cross-checks.
double caputo_derivative_ibp(const Kernel& k, const DerivativeSpec& spec,
                             const SmoothFn& fn, double x, const quad::QuadConfig& q = {});

// Riemann-Liouville counterpart: I^{n-alpha,psi} f on a local stencil, then n
// nested psi-weighted central differences (step 1e-4*(psi(b)-psi(a)) in
// psi-space). x must be interior so the stencil stays inside iv.
double rl_derivative(const Kernel& k, const Interval& iv, const DerivativeSpec& spec,
                     const SmoothFn& fn, double x, const quad::QuadConfig& q = {});

// Closed form for f = (psi(x)-psi(base))^(beta-1) (mirrored on the right):
// Gamma(beta)/Gamma(beta-alpha) * (psi(x)-psi(base))^(beta-alpha-1) for
// beta > n; 0 when beta-1 is an integer below n (monomial annihilation).
double power_rule(const Kernel& k, double alpha, Side side, double base,
                  double beta, double x);

struct MLEigenValue {
    double f;           // E_alpha(lambda (psi(x)-psi(base))^alpha), mirrored on right
    double derivative;  // lambda * f
};
MLEigenValue ml_eigen(const Kernel& k, double alpha, double lambda, Side side,
                      double base, double x, const special::MLConfig& cfg = {});

// Left-side eigenfunction as a SmoothFn with term-wise analytic derivatives
// (orders 1..3) and the singular-power annotation p = alpha.
SmoothFn ml_eigen_fn(const Kernel& k, double alpha, double lambda, double base,
                     const special::MLConfig& cfg = {});

// psi(x) * D^alpha f + I^{1-alpha} f - (1-alpha) I^{2-alpha} f^[1]_psi,
// alpha in (0,1), left side; each term evaluated by this module's operations.
double product_rule_psi(const Kernel& k, double alpha, double base,
                        const SmoothFn& fn, double x, const quad::QuadConfig& q = {});

// First-order expansion of D^{1-eps} f around integer order one:
// f^[1](x) + eps*(gamma f^[1](x) + f^[1](a) ln(psi(x)-psi(a)) + log integral).
double low_fractionality(const Kernel& k, const SmoothFn& fn, double epsilon,
                         double base, double x, const quad::QuadConfig& q = {});

// Operator norm bound K = (psi(b)-psi(a))^(n-alpha)/Gamma(n+1-alpha).
double bound_constant(const Kernel& k, double alpha, const Interval& iv);

}  // namespace psifrac::ops
