#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace psifrac {

// A function together with whatever derivative information the caller can
// supply: either analytic ordinary derivatives f', f'', ... or a
// finite-difference marker with a step scale.
//
// Optional annotations describe algebraic behaviour at the operator's base
// point, in powers of d = psi(x) - psi(base); the singular quadratures fold
// the declared exponents into the Jacobi weight (and substitute u = s^{1/step}
// for non-unit steps):
//   with_singular_power(p)    -- f = d^p * S, S smooth with S(base) != 0
//                                (single algebraic factor, integer-step tail)
//   with_base_series(p, step) -- f = sum_j c_j d^{p + j*step}
//                                (e.g. E_alpha(lambda d^alpha): p = 0 grid,
//                                 step = alpha)
//   with_fractional_power(p)  -- f = A + d^p * S with A analytic in d and an
//                                incommensurate p (handled conservatively)
class SmoothFn {
public:
    using Fn = std::function<double(double)>;

    static SmoothFn analytic(Fn f, std::vector<Fn> derivs);
    static SmoothFn finite_difference(Fn f, double step_scale = 1e-4);

    SmoothFn with_singular_power(double p) const;
    SmoothFn with_base_series(double p, double step) const;
    SmoothFn with_fractional_power(double p) const;

    double value(double x) const { return f_(x); }
    double operator()(double x) const { return f_(x); }

    // Ordinary derivative f^(k), k >= 1. Throws std::invalid_argument if the
    // function is analytic but carries fewer than k derivatives.
    double derivative(int k, double x) const;

    int analytic_order() const { return static_cast<int>(derivs_.size()); }
    bool finite_difference_mode() const { return fd_; }
    double fd_step(double x) const;

    std::optional<double> base_power() const { return base_power_; }
    bool base_power_pure() const { return pure_; }
    double base_step() const { return step_; }

    // Cross-checks the analytic derivatives against central differences at
    // the given points (tolerance 1e-5 relative); throws on disagreement.
    // No-op in finite-difference mode.
    void check_derivatives(std::span<const double> xs) const;

private:
    SmoothFn() = default;
    Fn f_;
    std::vector<Fn> derivs_;
    bool fd_ = false;
    double fd_scale_ = 1e-4;
    std::optional<double> base_power_;
    bool pure_ = false;
    double step_ = 1.0;
};

}  // namespace psifrac
