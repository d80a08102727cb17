#include "psifrac/smooth_fn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psifrac {

SmoothFn SmoothFn::analytic(Fn f, std::vector<Fn> derivs) {
    if (!f) throw std::invalid_argument("SmoothFn: null function");
    SmoothFn s;
    s.f_ = std::move(f);
    s.derivs_ = std::move(derivs);
    return s;
}

SmoothFn SmoothFn::finite_difference(Fn f, double step_scale) {
    if (!f) throw std::invalid_argument("SmoothFn: null function");
    if (!(step_scale > 0.0)) throw std::invalid_argument("SmoothFn: step scale must be > 0");
    SmoothFn s;
    s.f_ = std::move(f);
    s.fd_ = true;
    s.fd_scale_ = step_scale;
    return s;
}

SmoothFn SmoothFn::with_singular_power(double p) const {
    SmoothFn s = *this;
    s.base_power_ = p;
    s.pure_ = true;
    s.step_ = 1.0;
    return s;
}

SmoothFn SmoothFn::with_base_series(double p, double step) const {
    if (!(step > 0.0)) throw std::invalid_argument("SmoothFn: series step must be > 0");
    SmoothFn s = *this;
    s.base_power_ = p;
    s.pure_ = true;
    s.step_ = step;
    return s;
}

SmoothFn SmoothFn::with_fractional_power(double p) const {
    SmoothFn s = *this;
    s.base_power_ = p;
    s.pure_ = false;
    s.step_ = 1.0;
    return s;
}

double SmoothFn::fd_step(double x) const {
    return fd_scale_ * (1.0 + std::fabs(x));
}

double SmoothFn::derivative(int k, double x) const {
    if (k < 1) throw std::invalid_argument("SmoothFn::derivative: requires k >= 1");
    if (!fd_) {
        if (k > analytic_order()) {
            std::ostringstream os;
            os << "SmoothFn::derivative: order " << k << " requested but only "
               << analytic_order() << " analytic derivatives supplied";
            throw std::invalid_argument(os.str());
        }
        return derivs_[k - 1](x);
    }
    // nested central differences
    std::function<double(int, double)> d = [&](int order, double t) -> double {
        if (order == 0) return f_(t);
        double h = fd_step(t);
        return (d(order - 1, t + h) - d(order - 1, t - h)) / (2.0 * h);
    };
    return d(k, x);
}

void SmoothFn::check_derivatives(std::span<const double> xs) const {
    if (fd_) return;
    for (double x : xs) {
        for (int k = 1; k <= analytic_order(); ++k) {
            double h = 1e-5 * (1.0 + std::fabs(x));
            double fd = k == 1 ? (f_(x + h) - f_(x - h)) / (2.0 * h)
                               : (derivs_[k - 2](x + h) - derivs_[k - 2](x - h)) / (2.0 * h);
            double an = derivs_[k - 1](x);
            if (!(std::fabs(fd - an) <= 1e-5 * (1.0 + std::fabs(an)))) {
                std::ostringstream os;
                os << "SmoothFn::check_derivatives: analytic derivative " << k
                   << " disagrees with differences at x = " << x << " (" << an
                   << " vs " << fd << ")";
                throw std::invalid_argument(os.str());
            }
        }
    }
}

}  // namespace psifrac
