#pragma once

#include <string>

namespace psifrac {

// Shortest round-trip formatting (to_chars); "nan"/"inf" never appear in
// normal output paths.
std::string format_double(double v);

}  // namespace psifrac
