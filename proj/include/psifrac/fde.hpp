#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "psifrac/decomposition.hpp"
#include "psifrac/kernels.hpp"
#include "psifrac/special_functions.hpp"

namespace psifrac::fde {

// D^{alpha,psi}_{a+} f(x) = rhs(x, f(x)) on [a,b], f(a) = f0, alpha in (0,1).
struct CauchyProblem {
    Kernel kernel;
    double alpha;
    Interval interval;
    std::function<double(double, double)> rhs;
    double f0;
};

// First-order system obtained by solving the truncated decomposition for f':
//   f'  = psi'(x) [g(x,f) + sum_k B_k d^{1-alpha-k} V_k] / (A_N d^{1-alpha})
//   V_k' = k d^{k-1} f'
// State layout: (f, V_1..V_N).
class AssembledSystem {
public:
    AssembledSystem(const CauchyProblem& p, int N);

    int dimension() const { return N_ + 1; }
    std::vector<double> initial_state() const;
    // Writes d(state)/dx into dstate. x must satisfy x > a.
    void eval(double x, std::span<const double> state, std::span<double> dstate) const;

    const decomp::Coefficients& coeffs() const { return coeffs_; }

private:
    const CauchyProblem& problem_;
    int N_;
    decomp::Coefficients coeffs_;
};

AssembledSystem assemble(const CauchyProblem& p, int N);

struct Trajectory {
    std::vector<double> x;
    std::vector<double> f;
    std::vector<std::vector<double>> V;  // per grid point, N entries
    int N = 0;
    double step = 0.0;

    // CSV "x,f,V1..VN", shortest round-trip doubles.
    void write_csv(std::ostream& os) const;
};

// Classical RK4 at uniform step h = (b-a)/steps. Stage evaluations that land
// exactly on x = a are shifted to a + h/100 (evaluation offset only) to keep
// the d^{alpha-1} startup factor finite. Throws numeric_error if the state
// leaves the finite range, reporting the offending x.
Trajectory solve(const CauchyProblem& p, int N, int steps);

// N(t) = N0 E_alpha(lambda (psi(t)-psi(0))^alpha), the linear-equation solution.
double analytic_linear(const Kernel& k, double alpha, double lambda, double N0,
                       double t, const special::MLConfig& cfg = {});

}  // namespace psifrac::fde
