#include "d4m/keys.hpp"

#include <algorithm>
#include <array>

#include "d4m/error.hpp"

namespace d4m {
namespace {

bool has_forbidden_byte(std::string_view s) noexcept {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c == '\t' || c == '\n' || c == '\0'; });
}

void sort_unique(std::vector<std::string>& keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

}  // namespace

bool is_valid_key(std::string_view key) noexcept {
  return !key.empty() && !has_forbidden_byte(key);
}

void validate_key(std::string_view key) {
  if (key.empty()) fail(ErrorCode::kInvalidArgument, "empty key");
  if (has_forbidden_byte(key)) {
    fail(ErrorCode::kInvalidArgument,
         "key contains a tab, newline or NUL byte: '" + std::string(key) + "'");
  }
}

bool is_valid_value_text(std::string_view text) noexcept {
  return !has_forbidden_byte(text);
}

void validate_value_text(std::string_view text) {
  if (has_forbidden_byte(text)) {
    fail(ErrorCode::kInvalidArgument, "value contains a tab, newline or NUL byte");
  }
}

KeySpec KeySpec::list(std::vector<std::string> keys) {
  for (const auto& k : keys) validate_key(k);
  sort_unique(keys);
  KeySpec s;
  s.sel_ = std::move(keys);
  return s;
}

KeySpec KeySpec::range(std::string first, std::string last) {
  validate_key(first);
  validate_key(last);
  if (last < first) {
    fail(ErrorCode::kParse, "key range start '" + first + "' is after end '" + last + "'");
  }
  KeySpec s;
  s.sel_ = KeyRange{std::move(first), std::move(last)};
  return s;
}

bool KeySpec::matches(std::string_view key) const {
  switch (sel_.index()) {
    case 0:
      return true;
    case 1: {
      const auto& ks = std::get<1>(sel_);
      return std::binary_search(ks.begin(), ks.end(), key);
    }
    default:
      return std::get<2>(sel_).contains(key);
  }
}

KeySpec parse_key_spec(std::string_view spec) {
  if (spec.empty()) fail(ErrorCode::kParse, "empty key selector");
  if (spec == ":") return KeySpec::all();

  const char delim = spec.back();
  std::string_view body = spec.substr(0, spec.size() - 1);
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t pos = body.find(delim, start);
    if (pos == std::string_view::npos) pos = body.size();
    std::string_view item = body.substr(start, pos - start);
    if (item.empty()) {
      fail(ErrorCode::kParse, "empty item in key selector '" + std::string(spec) + "'");
    }
    if (!is_valid_key(item)) {
      fail(ErrorCode::kParse, "invalid key in selector '" + std::string(spec) + "'");
    }
    items.emplace_back(item);
    start = pos + 1;
  }

  if (items.size() == 3 && items[1] == ":") {
    return KeySpec::range(std::move(items[0]), std::move(items[2]));
  }
  return KeySpec::list(std::move(items));
}

std::string render_key_spec(const KeySpec& spec) {
  if (spec.is_all()) return ":";

  std::vector<std::string_view> items;
  if (spec.is_range()) {
    items = {spec.key_range().first, ":", spec.key_range().last};
  } else {
    const auto& ks = spec.keys();
    if (ks.empty()) fail(ErrorCode::kInvalidArgument, "cannot render an empty key list");
    if (ks.size() == 3 && ks[1] == ":") {
      fail(ErrorCode::kInvalidArgument, "key list would render as a range");
    }
    items.assign(ks.begin(), ks.end());
  }

  static constexpr std::array<char, 8> kDelims = {',', ';', '|', ' ', '/', '#', '~', '^'};
  for (char d : kDelims) {
    bool clash = std::any_of(items.begin(), items.end(), [d](std::string_view k) {
      return k.find(d) != std::string_view::npos;
    });
    if (clash) continue;
    std::string out;
    for (auto k : items) {
      out.append(k);
      out.push_back(d);
    }
    return out;
  }
  fail(ErrorCode::kInvalidArgument, "no free delimiter to render key selector");
}

}  // namespace d4m
