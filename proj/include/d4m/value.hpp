#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace d4m {

enum class ValueKind { kNum, kStr };

// A cell value. Arrays are homogeneous, so a Value only appears at the edges
// of the API (construction and triple export).
using Value = std::variant<double, std::string>;

inline ValueKind kind_of(const Value& v) {
  return std::holds_alternative<double>(v) ? ValueKind::kNum : ValueKind::kStr;
}

// Num(0.0) and Str("") are never stored.
inline bool is_zero(const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return *d == 0.0;
  return std::get<std::string>(v).empty();
}

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double x);

// Whole-string decimal float parse. NaN and trailing garbage are rejected.
std::optional<double> parse_number(std::string_view text);

std::string render_value(const Value& v);

}  // namespace d4m
