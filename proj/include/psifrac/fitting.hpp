#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "psifrac/kernels.hpp"

namespace psifrac::fit {

// Observations in model time units: times[0] = 0 at base_year, one unit =
// time_unit_years years.
struct Dataset {
    std::vector<double> times;
    std::vector<double> values;  // population, millions
    int base_year = 0;
    double time_unit_years = 1.0;
};

// Header "year,population", >= 2 rows, ascending years, positive populations.
Dataset load_csv(const std::string& path, double time_unit_years);

enum class Family { classical, fractional };

// classical: N(t) = N0 exp(lambda t)  (alpha = 1, linear kernel implied)
// fractional: N(t) = N0 E_alpha(lambda (psi(t)-psi(0))^alpha)
struct ModelSpec {
    Family family = Family::classical;
    std::string kernel_name = "linear";   // fractional only
    std::set<std::string> free;           // subset of {"lambda","alpha","b"}
    std::map<std::string, double> fixed;  // values for the non-free parameters
    enum class N0Policy { first_datum, free } n0_policy = N0Policy::first_datum;

    void validate() const;  // throws std::invalid_argument on violations
};

struct Params {
    double lambda = 0.0;
    double alpha = 1.0;
    double b = 1.0;
    double n0 = 0.0;
};

Params params_from(const std::map<std::string, double>& named);

double predict(const ModelSpec& model, const Params& p, double t);

double sse(const ModelSpec& model, const Params& p, const Dataset& data);

struct FitOptions {
    int max_iter = 200;
    bool multistart = true;  // lattice starts in addition to the caller's init
};

struct FitResult {
    Params params;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;
};

// Levenberg-Marquardt (forward-difference Jacobian, relative step 1e-6,
// damping start 1e-3, factor 10; stops when the relative SSE decrease or the
// step norm drops below 1e-10). Multistart over lambda in
// {0.05,0.1,0.5,1,3,5} x alpha in {0.8,1.4,2,4} plus the caller's init;
// returns the lowest-SSE run (ties to the earlier start).
// Bounds: lambda (0,100], alpha (0,10], b (0,5].
FitResult fit(const ModelSpec& model, const Dataset& data,
              const std::map<std::string, double>& init, const FitOptions& opts = {});

// |predict(t_star) - observed| / observed * 100.
double projection_error(const ModelSpec& model, const Params& p, double t_star,
                        double observed);

}  // namespace psifrac::fit
