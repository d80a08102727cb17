#include "psifrac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "psifrac/errors.hpp"

namespace psifrac {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("Interval: requires finite a < b");
}

Kernel::Kernel(std::string name, Fn psi, Fn dpsi,
               std::vector<std::pair<std::string, double>> params)
    : name_(std::move(name)), psi_(std::move(psi)), dpsi_(std::move(dpsi)),
      params_(std::move(params)) {
    if (!psi_ || !dpsi_) throw std::invalid_argument("Kernel: psi and dpsi are required");
}

Kernel& Kernel::with_higher_derivatives(Fn d2psi, Fn d3psi) {
    d2psi_ = std::move(d2psi);
    d3psi_ = std::move(d3psi);
    return *this;
}

Kernel& Kernel::with_inverse(Fn inverse) {
    inverse_ = std::move(inverse);
    return *this;
}

Kernel& Kernel::with_stable_forms(Fn2 gap, Fn2 offset_for_gap) {
    gap_ = std::move(gap);
    offset_ = std::move(offset_for_gap);
    return *this;
}

double Kernel::gap(double x, double base) const {
    if (gap_) return gap_(x, base);
    return psi_(x) - psi_(base);
}

double Kernel::offset_point(double base, double g, double lo, double hi) const {
    if (offset_) return base + offset_(base, g);
    return inverse(psi_(base) + g, lo, hi);
}

double Kernel::d2psi(double x) const {
    if (d2psi_) return d2psi_(x);
    const double h = 1e-5 * (1.0 + std::fabs(x));
    return (dpsi_(x + h) - dpsi_(x - h)) / (2.0 * h);
}

double Kernel::d3psi(double x) const {
    if (d3psi_) return d3psi_(x);
    const double h = 1e-4 * (1.0 + std::fabs(x));
    return (dpsi_(x + h) - 2.0 * dpsi_(x) + dpsi_(x - h)) / (h * h);
}

double Kernel::inverse(double v, double lo, double hi) const {
    if (inverse_) return inverse_(v);
    if (lo > hi) std::swap(lo, hi);
    double flo = psi_(lo) - v;
    double fhi = psi_(hi) - v;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw numeric_error("Kernel::inverse: value not bracketed by [lo,hi]");
    const double tol = 1e-13 * (1.0 + std::fabs(v));
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f = psi_(t) - v;
        if (std::fabs(f) <= tol) return t;
        if (f * flo < 0.0) { hi = t; } else { lo = t; flo = f; }
        double d = dpsi_(t);
        double tn = d != 0.0 ? t - f / d : t;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);  // bisection fallback
        if (tn == t) return t;
        t = tn;
    }
    throw numeric_error("Kernel::inverse: Newton/bisection did not converge");
}

Kernel builtin_kernel(const std::string& name, const std::map<std::string, double>& params) {
    auto no_params = [&] {
        if (!params.empty())
            throw std::invalid_argument("builtin_kernel: kernel '" + name + "' takes no parameters");
    };
    if (name == "linear") {
        no_params();
        Kernel k(name, [](double x) { return x; }, [](double) { return 1.0; });
        k.with_higher_derivatives([](double) { return 0.0; }, [](double) { return 0.0; });
        k.with_inverse([](double u) { return u; });
        k.with_stable_forms([](double x, double base) { return x - base; },
                            [](double, double g) { return g; });
        return k;
    }
    if (name == "log1p") {
        no_params();
        Kernel k(name, [](double x) { return std::log1p(x); },
                 [](double x) { return 1.0 / (x + 1.0); });
        k.with_higher_derivatives(
            [](double x) { return -1.0 / ((x + 1.0) * (x + 1.0)); },
            [](double x) { return 2.0 / ((x + 1.0) * (x + 1.0) * (x + 1.0)); });
        k.with_inverse([](double u) { return std::expm1(u); });
        k.with_stable_forms(
            [](double x, double base) { return std::log1p((x - base) / (1.0 + base)); },
            [](double base, double g) { return (1.0 + base) * std::expm1(g); });
        return k;
    }
    if (name == "sqrt1p") {
        no_params();
        Kernel k(name, [](double x) { return std::sqrt(x + 1.0); },
                 [](double x) { return 0.5 / std::sqrt(x + 1.0); });
        k.with_higher_derivatives(
            [](double x) { return -0.25 * std::pow(x + 1.0, -1.5); },
            [](double x) { return 0.375 * std::pow(x + 1.0, -2.5); });
        k.with_inverse([](double u) { return u * u - 1.0; });
        k.with_stable_forms(
            [](double x, double base) {
                return (x - base) / (std::sqrt(x + 1.0) + std::sqrt(base + 1.0));
            },
            [](double base, double g) {
                return g * (2.0 * std::sqrt(base + 1.0) + g);
            });
        return k;
    }
    if (name == "pow1p") {
        auto it = params.find("b");
        if (it == params.end())
            throw std::invalid_argument("builtin_kernel: pow1p requires parameter b");
        const double b = it->second;
        if (!(b > 0.0)) throw std::invalid_argument("builtin_kernel: pow1p requires b > 0");
        if (params.size() != 1)
            throw std::invalid_argument("builtin_kernel: pow1p takes only parameter b");
        Kernel k(name, [b](double x) { return std::pow(x + 1.0, b); },
                 [b](double x) { return b * std::pow(x + 1.0, b - 1.0); },
                 {{"b", b}});
        k.with_higher_derivatives(
            [b](double x) { return b * (b - 1.0) * std::pow(x + 1.0, b - 2.0); },
            [b](double x) { return b * (b - 1.0) * (b - 2.0) * std::pow(x + 1.0, b - 3.0); });
        k.with_inverse([b](double u) { return std::pow(u, 1.0 / b) - 1.0; });
        k.with_stable_forms(
            [b](double x, double base) {
                return std::pow(base + 1.0, b) *
                       std::expm1(b * std::log1p((x - base) / (1.0 + base)));
            },
            [b](double base, double g) {
                double pa = std::pow(base + 1.0, b);
                return (1.0 + base) * std::expm1(std::log1p(g / pa) / b);
            });
        return k;
    }
    if (name == "hadamard_log") {
        no_params();
        Kernel k(name, [](double x) { return std::log(x); },
                 [](double x) { return 1.0 / x; });
        k.with_higher_derivatives([](double x) { return -1.0 / (x * x); },
                                  [](double x) { return 2.0 / (x * x * x); });
        k.with_inverse([](double u) { return std::exp(u); });
        k.with_stable_forms(
            [](double x, double base) { return std::log1p((x - base) / base); },
            [](double base, double g) { return base * std::expm1(g); });
        return k;
    }
    if (name == "sine10") {
        no_params();
        Kernel k(name, [](double x) { return std::sin(x / 10.0); },
                 [](double x) { return std::cos(x / 10.0) / 10.0; });
        k.with_higher_derivatives([](double x) { return -std::sin(x / 10.0) / 100.0; },
                                  [](double x) { return -std::cos(x / 10.0) / 1000.0; });
        k.with_inverse([](double u) { return 10.0 * std::asin(u); });
        k.with_stable_forms(
            [](double x, double base) {
                return 2.0 * std::cos((x + base) / 20.0) * std::sin((x - base) / 20.0);
            },
            [](double base, double g) {
                double th = base / 10.0;
                double pa = std::sin(th), ca = std::cos(th);
                double y = pa + g;
                // asin(y) - asin(pa) without cancellation
                double arg = g * ca + pa * g * (y + pa) /
                                          (ca + std::sqrt(std::max(0.0, 1.0 - y * y)));
                return 10.0 * std::asin(arg);
            });
        return k;
    }
    throw std::invalid_argument("builtin_kernel: unknown kernel '" + name + "'");
}

Kernel parse_kernel(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) return builtin_kernel(spec);
    std::string name = spec.substr(0, colon);
    std::map<std::string, double> params;
    std::string rest = spec.substr(colon + 1);
    std::istringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("parse_kernel: expected key=value in '" + spec + "'");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        size_t pos = 0;
        double v;
        try {
            v = std::stod(val, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_kernel: bad numeric value in '" + spec + "'");
        }
        if (pos != val.size())
            throw std::invalid_argument("parse_kernel: bad numeric value in '" + spec + "'");
        params[key] = v;
    }
    if (params.empty())
        throw std::invalid_argument("parse_kernel: empty parameter list in '" + spec + "'");
    return builtin_kernel(name, params);
}

std::optional<KernelViolation> validate(const Kernel& k, const Interval& iv, int samples) {
    if (samples < 2) throw std::invalid_argument("validate: requires samples >= 2");
    const double mid = 0.5 * (iv.a + iv.b);
    const double half = 0.5 * (iv.b - iv.a);
    std::vector<double> xs(samples);
    for (int i = 0; i < samples; ++i) {
        double theta = M_PI * (2.0 * i + 1.0) / (2.0 * samples);
        xs[i] = mid + half * std::cos(theta);
    }
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
        double d = k.dpsi(x);
        if (!(d > 0.0))
            return KernelViolation{x, d, "dpsi must be positive"};
        double h = 1e-6 * (1.0 + std::fabs(x));
        double fd = (k.psi(x + h) - k.psi(x - h)) / (2.0 * h);
        if (!(std::fabs(fd - d) <= 1e-6 * (1.0 + std::fabs(d))))
            return KernelViolation{x, fd - d, "dpsi disagrees with differenced psi"};
    }
    return std::nullopt;
}

void validate_or_throw(const Kernel& k, const Interval& iv, int samples) {
    if (auto v = validate(k, iv, samples)) {
        std::ostringstream os;
        os << "kernel '" << k.name() << "' invalid on [" << iv.a << "," << iv.b
           << "]: " << v->reason << " at x = " << v->x << " (value " << v->value << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace psifrac
