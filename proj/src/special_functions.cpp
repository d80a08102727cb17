#include "psifrac/special_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "psifrac/errors.hpp"

namespace psifrac::special {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace

double gamma(double x) {
    if (std::isnan(x)) throw std::domain_error("gamma: NaN argument");
    if (is_nonpositive_integer(x)) {
        std::ostringstream os;
        os << "gamma: pole at x = " << x;
        throw std::domain_error(os.str());
    }
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta: requires x, y > 0");
    if (x + y < 170.0) return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y);
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double gen_binomial(double p, int k) {
    if (k < 0) throw std::domain_error("gen_binomial: requires k >= 0");
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= (p - j) / (j + 1);
    return r;
}

double euler_gamma() {
    return 0.57721566490153286060651209008240243;
}

double mittag_leffler(double alpha, double z, const MLConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("mittag_leffler: requires alpha > 0");
    if (!(cfg.tol > 0.0) || cfg.max_terms < 1)
        throw std::invalid_argument("mittag_leffler: invalid MLConfig");
    if (z == 0.0) return 1.0;

    const double lz = std::log(std::fabs(z));
    const double sign = z < 0.0 ? -1.0 : 1.0;
    double sum = 0.0, comp = 0.0;  // Kahan
    int below = 0;
    for (int k = 0; k < cfg.max_terms; ++k) {
        double mag = std::exp(k * lz - std::lgamma(alpha * k + 1.0));
        double term = (k % 2 == 1 && sign < 0.0) ? -mag : mag;
        if (!std::isfinite(term))
            throw numeric_error("mittag_leffler: series term overflow");
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (mag < cfg.tol) {
            if (++below >= 2) return sum;
        } else {
            below = 0;
        }
    }
    throw numeric_error("mittag_leffler: series did not converge within max_terms");
}

double ml_power_series_deriv(double alpha, double lambda, double w, int m,
                             const MLConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("ml_power_series_deriv: requires alpha > 0");
    if (m < 0) throw std::domain_error("ml_power_series_deriv: requires m >= 0");
    if (m == 0 && w == 0.0) return 1.0;
    if (!(w > 0.0)) throw std::domain_error("ml_power_series_deriv: requires w > 0 for m >= 1");

    const double lw = std::log(w);
    const double ll = std::fabs(lambda) > 0.0 ? std::log(std::fabs(lambda))
                                              : -std::numeric_limits<double>::infinity();
    const double lsign = lambda < 0.0 ? -1.0 : 1.0;
    double sum = m == 0 ? 1.0 : 0.0;  // k = 0 term
    double comp = 0.0;
    int below = 0;
    for (int k = 1; k < cfg.max_terms; ++k) {
        // falling factorial (alpha k)(alpha k - 1)...(alpha k - m + 1)
        double ff = 1.0;
        for (int j = 0; j < m; ++j) ff *= alpha * k - j;
        double mag = std::exp(k * ll + (alpha * k - m) * lw - std::lgamma(alpha * k + 1.0));
        double term = ff * mag * ((k % 2 == 1 && lsign < 0.0) ? -1.0 : 1.0);
        if (!std::isfinite(term))
            throw numeric_error("ml_power_series_deriv: series term overflow");
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::fabs(term) < cfg.tol) {
            if (++below >= 2) return sum;
        } else {
            below = 0;
        }
    }
    throw numeric_error("ml_power_series_deriv: series did not converge within max_terms");
}

}  // namespace psifrac::special
