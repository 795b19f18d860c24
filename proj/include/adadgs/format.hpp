#pragma once

#include <string>
#include <string_view>

namespace adadgs {

/// Shortest decimal string that parses back to exactly `value`.
/// Locale independent.
std::string format_double(double value);

/// Parses a full decimal token; throws std::invalid_argument on junk or
/// trailing characters. Locale independent.
double parse_double(std::string_view text);

}  // namespace adadgs
