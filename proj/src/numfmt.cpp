#include "di/numfmt.hpp"

#include <charconv>

#include "di/error.hpp"

namespace di {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) fail(ErrorKind::kInternal, "cannot format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    fail(ErrorKind::kInvalidInput, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long parse_int(std::string_view text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    fail(ErrorKind::kInvalidInput, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace di
