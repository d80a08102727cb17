#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace psifrac {

struct Interval {
    double a;
    double b;
    Interval(double a_, double b_);  // requires finite a < b
    double width() const { return b - a; }
};

// The "other function" psi: increasing, C^1, with psi'(x) != 0 on the working
// interval. psi' is analytic (user-supplied); higher derivatives and the
// inverse are optional and fall back to differencing / a safeguarded Newton
// solve when absent. Immutable after construction.
class Kernel {
public:
    using Fn = std::function<double(double)>;

    Kernel(std::string name, Fn psi, Fn dpsi,
           std::vector<std::pair<std::string, double>> params = {});

    using Fn2 = std::function<double(double, double)>;

    Kernel& with_higher_derivatives(Fn d2psi, Fn d3psi);
    Kernel& with_inverse(Fn inverse);
    // Cancellation-free forms for evaluation near a base point:
    // gap(x, base) = psi(x) - psi(base), and offset_for_gap(base, g) solving
    // psi(base + delta) = psi(base) + g for delta.
    Kernel& with_stable_forms(Fn2 gap, Fn2 offset_for_gap);

    double psi(double x) const { return psi_(x); }
    double dpsi(double x) const { return dpsi_(x); }
    double d2psi(double x) const;  // analytic or central difference of dpsi
    double d3psi(double x) const;

    // psi(x) - psi(base), via the stable form when present.
    double gap(double x, double base) const;

    bool has_analytic_inverse() const { return static_cast<bool>(inverse_); }
    // Solve psi(t) = v for t. Analytic inverse when present, otherwise
    // safeguarded Newton with bisection fallback on the bracket [lo,hi],
    // tolerance 1e-13 in psi-space.
    double inverse(double v, double lo, double hi) const;

    // Solve psi(base + delta) = psi(base) + g for base + delta, keeping the
    // offset instead of forming psi(base) + g (which rounds it away for tiny
    // g). Falls back to inverse() when no stable form is registered.
    double offset_point(double base, double g, double lo, double hi) const;

    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, double>>& params() const { return params_; }

private:
    std::string name_;
    Fn psi_, dpsi_, d2psi_, d3psi_, inverse_;
    Fn2 gap_, offset_;
    std::vector<std::pair<std::string, double>> params_;
};

// Builtin families: linear, log1p, sqrt1p, pow1p (requires b > 0),
// hadamard_log, sine10. Throws std::invalid_argument for unknown names or
// missing/invalid parameters.
Kernel builtin_kernel(const std::string& name, const std::map<std::string, double>& params = {});

// "name" or "name:key=value" (e.g. "pow1p:b=0.66734").
Kernel parse_kernel(const std::string& spec);

struct KernelViolation {
    double x;
    double value;
    std::string reason;
};

// Checks dpsi > 0 at `samples` Chebyshev-distributed points of iv, and that
// a central difference of psi matches dpsi to 1e-6*(1+|dpsi|) there.
// Returns the first violation in increasing x, or nullopt if admissible.
std::optional<KernelViolation> validate(const Kernel& k, const Interval& iv, int samples);

void validate_or_throw(const Kernel& k, const Interval& iv, int samples = 64);

}  // namespace psifrac
