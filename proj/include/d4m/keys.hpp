#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace d4m {

// Keys are non-empty byte strings free of tab, newline and NUL. They are
// ordered byte-wise, which is what std::string comparison already does.
bool is_valid_key(std::string_view key) noexcept;
void validate_key(std::string_view key);

// Values share the forbidden bytes with keys but may be empty.
bool is_valid_value_text(std::string_view text) noexcept;
void validate_value_text(std::string_view text);

struct KeyRange {
  std::string first;  // inclusive
  std::string last;   // inclusive

  bool contains(std::string_view key) const noexcept {
    return first <= key && key <= last;
  }
  friend bool operator==(const KeyRange&, const KeyRange&) = default;
};

// Selector over one dimension: everything, an explicit key list, or an
// inclusive key range.
class KeySpec {
 public:
  KeySpec() = default;  // All

  static KeySpec all() { return KeySpec(); }
  static KeySpec list(std::vector<std::string> keys);
  static KeySpec range(std::string first, std::string last);

  bool is_all() const noexcept { return std::holds_alternative<AllKeys>(sel_); }
  bool is_list() const noexcept {
    return std::holds_alternative<std::vector<std::string>>(sel_);
  }
  bool is_range() const noexcept { return std::holds_alternative<KeyRange>(sel_); }

  // Sorted, unique. Only valid when is_list().
  const std::vector<std::string>& keys() const {
    return std::get<std::vector<std::string>>(sel_);
  }
  const KeyRange& key_range() const { return std::get<KeyRange>(sel_); }

  bool matches(std::string_view key) const;

  friend bool operator==(const KeySpec&, const KeySpec&) = default;

 private:
  struct AllKeys {
    friend bool operator==(const AllKeys&, const AllKeys&) = default;
  };
  std::variant<AllKeys, std::vector<std::string>, KeyRange> sel_;
};

// Selector strings follow the matrix-toolbox convention: the last character
// is the delimiter ("a,b," or "a;b;"), "a,:,c," is an inclusive range and the
// bare ":" selects everything.
KeySpec parse_key_spec(std::string_view spec);

// Canonical text form; parse_key_spec(render_key_spec(s)) == s.
std::string render_key_spec(const KeySpec& spec);

}  // namespace d4m
