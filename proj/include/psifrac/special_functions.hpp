#pragma once

#include <vector>

namespace psifrac::special {

// Gamma function. Throws std::domain_error at the poles x = 0, -1, -2, ...
double gamma(double x);

// log(Gamma(x)) for x > 0.
double log_gamma(double x);

// Beta function B(x,y) = Gamma(x)Gamma(y)/Gamma(x+y), x,y > 0.
double beta(double x, double y);

// Generalised binomial coefficient C(p,k) = p(p-1)...(p-k+1)/k!, C(p,0) = 1.
double gen_binomial(double p, int k);

// Euler-Mascheroni constant.
double euler_gamma();

// Truncation control for the Mittag-Leffler series.
struct MLConfig {
    double tol = 1e-14;   // absolute per-term tolerance
    int max_terms = 2000;
};

// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1),
// alpha > 0, real z. Direct series with compensated summation; stops once two
// consecutive terms fall below cfg.tol. Throws numeric_error if max_terms is
// reached with terms still above tolerance (or terms overflow).
double mittag_leffler(double alpha, double z, const MLConfig& cfg = {});

// m-th derivative (w.r.t. w) of w |-> E_alpha(lambda * w^alpha) at w > 0,
// by term-wise differentiation of the series. m = 0 gives the function itself.
double ml_power_series_deriv(double alpha, double lambda, double w, int m,
                             const MLConfig& cfg = {});

}  // namespace psifrac::special
