#pragma once

#include <string>

namespace aalenfic {

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

}  // namespace aalenfic
