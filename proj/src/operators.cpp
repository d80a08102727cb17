#include "psifrac/operators.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "psifrac/errors.hpp"

namespace psifrac::ops {

namespace {

bool is_integer(double v) { return v == std::floor(v); }

int order_n(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("DerivativeSpec: requires alpha > 0");
    return is_integer(alpha) ? static_cast<int>(alpha)
                             : static_cast<int>(std::floor(alpha)) + 1;
}

double sign_pow(int n) { return (n & 1) ? -1.0 : 1.0; }

// Distance psi(x) - psi(base) on the operator's own side; throws if x lies on
// the wrong side of the base point.
double psi_gap(const Kernel& k, Side side, double base, double x) {
    double d = side == Side::left ? k.gap(x, base) : k.gap(base, x);
    if (d < 0.0) {
        std::ostringstream os;
        os << "operator evaluation at x = " << x << " lies outside the "
           << (side == Side::left ? "left" : "right") << "-side domain (base " << base << ")";
        throw std::invalid_argument(os.str());
    }
    return d;
}

// t(u) for the substitution u = (psi(t)-psi(base))/gap (left) and its mirror.
// Strong power substitutions push nodes exponentially close to the base;
// the offset form keeps psi(base) + u*gap from rounding the offset away.
double map_node(const Kernel& k, Side side, double base, double x, double gap, double u) {
    double lo = std::min(base, x), hi = std::max(base, x);
    double g = side == Side::left ? u * gap : -u * gap;
    return k.offset_point(base, g, lo, hi);
}

// integral_0^1 (1-u)^g F(u) du where F is the mapped integrand built from
// f^[order]; fn's endpoint annotation decides how the u = 0 behaviour is
// folded into the Jacobi weight. The declared base power shifts down by one
// per psi-derivative. A non-unit series step additionally substitutes
// u = s^{1/step}, which maps the whole endpoint series onto integer powers.
double endpoint_weighted_quad(double g, const SmoothFn& fn, int order,
                              const std::function<double(double)>& F,
                              const quad::QuadConfig& cfg) {
    if (!fn.base_power()) return quad::weighted_integral01(g, 0.0, F, cfg);
    // Integer powers below the derivative order are annihilated; the leading
    // surviving exponent steps up the declared grid past them.
    double lead = *fn.base_power();
    if (fn.base_power_pure())
        while (lead >= 0.0 && lead < order && lead == std::floor(lead))
            lead += fn.base_step();
    const double sf = lead - order;
    if (!(sf > -1.0))
        throw std::domain_error("base-power annotation makes the integrand non-integrable");
    if (!fn.base_power_pure()) {
        double s = std::min(sf, 0.0);
        if (s == 0.0) return quad::weighted_integral01(g, 0.0, F, cfg);
        return quad::weighted_integral01(g, s,
                                         [&](double u) { return F(u) * std::pow(u, -s); },
                                         cfg);
    }
    const double step = fn.base_step();
    if (step == 1.0) {
        if (sf == 0.0) return quad::weighted_integral01(g, 0.0, F, cfg);
        return quad::weighted_integral01(g, sf,
                                         [&](double u) { return F(u) * std::pow(u, -sf); },
                                         cfg);
    }
    // q must be a multiple of 1/step so the series lands on integer powers;
    // q >= 2 keeps the (1-s^q) ratio factor at least C^1 at s = 0.
    const double q = std::ceil(2.0 * step) / step;
    const double b = q * (sf + 1.0) - 1.0;
    if (!(b > -1.0))
        throw std::domain_error("base-series annotation makes the integrand non-integrable");
    auto transformed = [&](double s) {
        double one_minus_uq = -std::expm1(q * std::log(s));
        double ratio = one_minus_uq / (1.0 - s);  // analytic, -> q as s -> 1
        return std::pow(ratio, g) * std::pow(s, -q * sf) * F(std::pow(s, q));
    };
    return q * quad::weighted_integral01(g, b, transformed, cfg);
}

}  // namespace

DerivativeSpec DerivativeSpec::left(double alpha, double base) {
    return DerivativeSpec{alpha, Side::left, base, order_n(alpha)};
}

DerivativeSpec DerivativeSpec::right(double alpha, double base) {
    return DerivativeSpec{alpha, Side::right, base, order_n(alpha)};
}

bool DerivativeSpec::integer_order() const { return is_integer(alpha); }

double psi_weighted_derivative(const Kernel& k, const SmoothFn& fn, int order, double x) {
    if (order < 0) throw std::invalid_argument("psi_weighted_derivative: order must be >= 0");
    if (order == 0) return fn.value(x);

    const bool analytic = !fn.finite_difference_mode() && fn.analytic_order() >= std::min(order, 3);
    if (!fn.finite_difference_mode() && fn.analytic_order() < std::min(order, 3)) {
        std::ostringstream os;
        os << "psi_weighted_derivative: order " << order << " needs "
           << std::min(order, 3) << " analytic derivatives, got " << fn.analytic_order();
        throw std::invalid_argument(os.str());
    }

    std::function<double(int, double)> g = [&](int m, double t) -> double {
        if (m == 0) return fn.value(t);
        if (analytic && m <= 3) {
            double p1 = k.dpsi(t);
            double f1 = fn.derivative(1, t);
            if (m == 1) return f1 / p1;
            double p2 = k.d2psi(t);
            double f2 = fn.derivative(2, t);
            if (m == 2) return (f2 * p1 - f1 * p2) / (p1 * p1 * p1);
            double p3 = k.d3psi(t);
            double f3 = fn.derivative(3, t);
            return ((f3 * p1 - f1 * p3) * p1 - 3.0 * p2 * (f2 * p1 - f1 * p2)) /
                   (p1 * p1 * p1 * p1 * p1);
        }
        double h = fn.finite_difference_mode() ? fn.fd_step(t) : 1e-4 * (1.0 + std::fabs(t));
        return (g(m - 1, t + h) - g(m - 1, t - h)) / (2.0 * h * k.dpsi(t));
    };
    return g(order, x);
}

double frac_integral(const Kernel& k, double alpha, Side side, double base,
                     const SmoothFn& fn, double x, const quad::QuadConfig& q) {
    if (!(alpha > 0.0)) throw std::domain_error("frac_integral: requires alpha > 0");
    double gap = psi_gap(k, side, base, x);
    if (gap == 0.0) return 0.0;
    auto F = [&](double u) { return fn.value(map_node(k, side, base, x, gap, u)); };
    double integral = endpoint_weighted_quad(alpha - 1.0, fn, 0, F, q);
    return std::pow(gap, alpha) / special::gamma(alpha) * integral;
}

double caputo_derivative(const Kernel& k, const DerivativeSpec& spec,
                         const SmoothFn& fn, double x, const quad::QuadConfig& q) {
    const int n = spec.n;
    if (spec.integer_order()) {
        double v = psi_weighted_derivative(k, fn, n, x);
        return spec.side == Side::right ? sign_pow(n) * v : v;
    }
    double gap = psi_gap(k, spec.side, spec.base, x);
    if (gap == 0.0) return 0.0;  // continuous extension at the base point
    const double rsign = spec.side == Side::right ? sign_pow(n) : 1.0;
    auto F = [&](double u) {
        double t = map_node(k, spec.side, spec.base, x, gap, u);
        return rsign * psi_weighted_derivative(k, fn, n, t);
    };
    double integral = endpoint_weighted_quad(n - spec.alpha - 1.0, fn, n, F, q);
    return std::pow(gap, n - spec.alpha) / special::gamma(n - spec.alpha) * integral;
}

double caputo_derivative_ibp(const Kernel& k, const DerivativeSpec& spec,
                             const SmoothFn& fn, double x, const quad::QuadConfig& q) {
    const int n = spec.n;
    double gap = psi_gap(k, spec.side, spec.base, x);
    const double gamma_n1a = special::gamma(n + 1.0 - spec.alpha);
    if (gap == 0.0)
        return spec.integer_order()
                   ? (spec.side == Side::right ? sign_pow(n) : 1.0) *
                         psi_weighted_derivative(k, fn, n, x)
                   : 0.0;
    const double rsign = spec.side == Side::right ? sign_pow(n) : 1.0;
    auto F = [&](double u) {
        double t = map_node(k, spec.side, spec.base, x, gap, u);
        return psi_weighted_derivative(k, fn, n + 1, t);
    };
    double integral = endpoint_weighted_quad(n - spec.alpha, fn, n + 1, F, q);
    double boundary = std::pow(gap, n - spec.alpha) / gamma_n1a *
                      psi_weighted_derivative(k, fn, n, spec.base);
    double tail = std::pow(gap, n - spec.alpha + 1.0) / gamma_n1a * integral;
    // right side: (-1)^n boundary minus the (-1)^n-weighted integral
    return spec.side == Side::left ? boundary + tail : rsign * (boundary - tail);
}

double rl_derivative(const Kernel& k, const Interval& iv, const DerivativeSpec& spec,
                     const SmoothFn& fn, double x, const quad::QuadConfig& q) {
    const int n = spec.n;
    if (spec.integer_order()) {
        double v = psi_weighted_derivative(k, fn, n, x);
        return spec.side == Side::right ? sign_pow(n) * v : v;
    }
    const double h = 1e-4 * (k.psi(iv.b) - k.psi(iv.a));
    const double vx = k.psi(x);
    if (!(vx - n * h > k.psi(iv.a) && vx + n * h < k.psi(iv.b)))
        throw std::invalid_argument("rl_derivative: difference stencil exits the interval");

    auto G = [&](double v) {
        double t = k.inverse(v, iv.a, iv.b);
        return frac_integral(k, n - spec.alpha, spec.side, spec.base, fn, t, q);
    };
    std::function<double(int, double)> d = [&](int m, double v) -> double {
        if (m == 0) return G(v);
        return (d(m - 1, v + h) - d(m - 1, v - h)) / (2.0 * h);
    };
    double val = d(n, vx);
    return spec.side == Side::right ? sign_pow(n) * val : val;
}

double power_rule(const Kernel& k, double alpha, Side side, double base,
                  double beta, double x) {
    const int n = order_n(alpha);
    double km = beta - 1.0;
    if (is_integer(km) && km >= 0.0 && km < n) return 0.0;  // monomial annihilation
    if (!(beta > n)) throw std::domain_error("power_rule: requires beta > n");
    double gap = psi_gap(k, side, base, x);
    return special::gamma(beta) / special::gamma(beta - alpha) *
           std::pow(gap, beta - alpha - 1.0);
}

MLEigenValue ml_eigen(const Kernel& k, double alpha, double lambda, Side side,
                      double base, double x, const special::MLConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("ml_eigen: requires alpha > 0");
    double gap = psi_gap(k, side, base, x);
    double f = special::mittag_leffler(alpha, lambda * std::pow(gap, alpha), cfg);
    return {f, lambda * f};
}

SmoothFn ml_eigen_fn(const Kernel& k, double alpha, double lambda, double base,
                     const special::MLConfig& cfg) {
    if (!(alpha > 0.0)) throw std::domain_error("ml_eigen_fn: requires alpha > 0");
    auto G = [=](double w, int m) {
        return special::ml_power_series_deriv(alpha, lambda, w, m, cfg);
    };
    auto value = [=](double x) {
        return special::mittag_leffler(alpha, lambda * std::pow(k.gap(x, base), alpha), cfg);
    };
    auto d1 = [=](double x) {
        double w = k.gap(x, base);
        return G(w, 1) * k.dpsi(x);
    };
    auto d2 = [=](double x) {
        double w = k.gap(x, base);
        double p1 = k.dpsi(x);
        return G(w, 2) * p1 * p1 + G(w, 1) * k.d2psi(x);
    };
    auto d3 = [=](double x) {
        double w = k.gap(x, base);
        double p1 = k.dpsi(x);
        return G(w, 3) * p1 * p1 * p1 + 3.0 * G(w, 2) * p1 * k.d2psi(x) + G(w, 1) * k.d3psi(x);
    };
    // expansion at the base runs over the alpha-grid: 1, d^alpha, d^{2 alpha}, ...
    return SmoothFn::analytic(value, {d1, d2, d3}).with_base_series(0.0, alpha);
}

double product_rule_psi(const Kernel& k, double alpha, double base,
                        const SmoothFn& fn, double x, const quad::QuadConfig& q) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("product_rule_psi: requires alpha in (0,1)");
    auto spec = DerivativeSpec::left(alpha, base);
    double t1 = k.psi(x) * caputo_derivative(k, spec, fn, x, q);
    double t2 = frac_integral(k, 1.0 - alpha, Side::left, base, fn, x, q);
    SmoothFn g1 = SmoothFn::analytic(
        [&k, fn](double t) { return psi_weighted_derivative(k, fn, 1, t); }, {});
    if (fn.base_power()) {
        double p1 = *fn.base_power() - 1.0;
        g1 = fn.base_power_pure() ? g1.with_singular_power(p1) : g1.with_fractional_power(p1);
    }
    double t3 = frac_integral(k, 2.0 - alpha, Side::left, base, g1, x, q);
    return t1 + t2 - (1.0 - alpha) * t3;
}

namespace {

// integral_0^1 g(u) ln(1-u) du; substitution 1-u = s^3 removes the endpoint
// log, then Gauss-Legendre panels with the same refinement agreement check.
double log_weight_integral01(const std::function<double(double)>& g,
                             const quad::QuadConfig& q) {
    auto transformed = [&](double s) { return 9.0 * g(1.0 - s * s * s) * s * s * std::log(s); };
    auto level = [&](int P) {
        double total = 0.0;
        double L = 1.0 / P;
        for (int j = 0; j < P; ++j)
            total += quad::gauss_legendre(transformed, j * L, (j + 1) * L, q.nodes);
        return total;
    };
    double v1 = level(q.refinement);
    double v2 = level(2 * q.refinement);
    if (!(std::fabs(v2 - v1) <= 1e-9 * (1.0 + std::fabs(v2))))
        throw numeric_error("log_weight_integral01: refinement levels disagree");
    return v2;
}

}  // namespace

double low_fractionality(const Kernel& k, const SmoothFn& fn, double epsilon,
                         double base, double x, const quad::QuadConfig& q) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("low_fractionality: requires epsilon in (0,1)");
    double gap = psi_gap(k, Side::left, base, x);
    if (gap == 0.0) throw std::invalid_argument("low_fractionality: requires x > base");
    double f1x = psi_weighted_derivative(k, fn, 1, x);
    double f1a = psi_weighted_derivative(k, fn, 1, base);
    auto f2 = [&](double u) {
        return psi_weighted_derivative(k, fn, 2, map_node(k, Side::left, base, x, gap, u));
    };
    double smooth_part = quad::weighted_integral01(0.0, 0.0, f2, q);
    double log_part = log_weight_integral01(f2, q);
    double L = gap * std::log(gap) * smooth_part + gap * log_part;
    return f1x + epsilon * (special::euler_gamma() * f1x + f1a * std::log(gap) + L);
}

double bound_constant(const Kernel& k, double alpha, const Interval& iv) {
    const int n = order_n(alpha);
    return std::pow(k.psi(iv.b) - k.psi(iv.a), n - alpha) /
           special::gamma(n + 1.0 - alpha);
}

}  // namespace psifrac::ops
