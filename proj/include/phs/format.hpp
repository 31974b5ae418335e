#pragma once

#include <string>

namespace phs {

// Shortest decimal representation that round-trips to the same double.
// Infinities print as "inf" / "-inf", NaN as "nan".
std::string format_double(double value);

}  // namespace phs
