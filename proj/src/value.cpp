#include "d4m/value.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace d4m {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double out = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  // from_chars does not accept an explicit plus sign.
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || std::isnan(out)) return std::nullopt;
  return out;
}

std::string render_value(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

}  // namespace d4m
