#pragma once

#include <string>
#include <string_view>

namespace di {

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Strict full-string parse; throws Error(kInvalidInput).
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace di
