#pragma once

#include <functional>
#include <vector>

namespace psifrac::quad {

// Gauss-rule size and panel count for the weakly singular integrals.
struct QuadConfig {
    int nodes = 40;
    int refinement = 4;
};

struct Rule {
    std::vector<double> x;  // nodes
    std::vector<double> w;  // weights
};

// Gauss-Jacobi rule on [0,1] for the weight (1-u)^a * u^b, a,b > -1.
// Nodes/weights via Golub-Welsch; results are cached per (n,a,b).
const Rule& gauss_jacobi01(int n, double a, double b);

// integral_0^1 (1-u)^a u^b g(u) du with g smooth on (0,1).
// Splits [0,1] into `refinement` panels (Jacobi end panels, Legendre inside),
// doubles the panel count and requires agreement to 1e-9 between the two
// levels; throws numeric_error otherwise. Returns the finer value.
double weighted_integral01(double a, double b, const std::function<double(double)>& g,
                           const QuadConfig& cfg = {});

// Plain Gauss-Legendre on [lo,hi] with n nodes (single panel).
double gauss_legendre(const std::function<double(double)>& f, double lo, double hi, int n);

}  // namespace psifrac::quad
