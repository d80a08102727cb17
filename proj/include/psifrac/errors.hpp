#pragma once

#include <stdexcept>
#include <string>

namespace psifrac {

// Runtime numeric failure: quadrature disagreement, series non-convergence,
// solver blow-up. Distinct from std::invalid_argument / std::domain_error,
// which signal bad inputs.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace psifrac
