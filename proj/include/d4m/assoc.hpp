#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "d4m/keys.hpp"
#include "d4m/value.hpp"

namespace d4m {

struct Triple {
  std::string row;
  std::string col;
  Value value;

  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class Collision { kSum, kMin, kMax, kLast };

// Element-wise combining operator. Plus and Times are numeric only; Min, Max
// and Last are also defined for strings (byte-wise order for Min/Max).
enum class BinaryOp { kPlus, kTimes, kMin, kMax, kLast };

// Sparse two-dimensional map from (row key, column key) to a value.
//
// Storage is compressed sparse rows over the sorted row and column key lists.
// The dimension keys are exactly the support: every row key and every column
// key owns at least one entry, and no zero values are stored. Instances are
// immutable once built; every operation returns a new array.
class AssocArray {
 public:
  AssocArray() = default;  // empty Num array

  ValueKind kind() const noexcept { return kind_; }
  bool is_num() const noexcept { return kind_ == ValueKind::kNum; }

  const std::vector<std::string>& row_keys() const noexcept { return rows_; }
  const std::vector<std::string>& col_keys() const noexcept { return cols_; }

  std::size_t nnz() const noexcept { return col_idx_.size(); }
  std::pair<std::size_t, std::size_t> dims() const noexcept {
    return {rows_.size(), cols_.size()};
  }
  bool empty() const noexcept { return col_idx_.empty(); }

  // CSR access. Entries of row r occupy [row_begin(r), row_end(r)).
  std::size_t row_begin(std::size_t r) const { return row_ptr_[r]; }
  std::size_t row_end(std::size_t r) const { return row_ptr_[r + 1]; }
  std::uint32_t col_index(std::size_t e) const { return col_idx_[e]; }
  double num(std::size_t e) const { return num_[e]; }
  const std::string& str(std::size_t e) const { return str_[e]; }
  Value value(std::size_t e) const;

  std::optional<std::size_t> find_row(std::string_view key) const;
  std::optional<std::size_t> find_col(std::string_view key) const;
  std::optional<Value> at(std::string_view row, std::string_view col) const;

  std::vector<Triple> to_triples() const;

  friend bool operator==(const AssocArray&, const AssocArray&) = default;

 private:
  friend class AssocBuilder;
  friend AssocArray transpose(const AssocArray& a);
  friend AssocArray logical(const AssocArray& a);

  ValueKind kind_ = ValueKind::kNum;
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> num_;
  std::vector<std::string> str_;
};

// Accumulates entries that arrive in row-major order (rows non-decreasing,
// columns strictly increasing within a row) and produces a compacted array.
// Zero values are skipped, so empty rows and unused columns never appear.
//
// The second constructor fixes a sorted column universe up front; entries are
// then added by position in that universe, which avoids key lookups in hot
// loops such as matrix multiply.
class AssocBuilder {
 public:
  explicit AssocBuilder(ValueKind kind) : kind_(kind) {}
  AssocBuilder(ValueKind kind, std::vector<std::string> col_universe);

  void add_num(std::string_view row, std::string_view col, double v);
  void add_str(std::string_view row, std::string_view col, std::string v);
  void add(std::string_view row, std::string_view col, Value v);

  void add_num_at(std::string_view row, std::uint32_t col, double v);
  void add_str_at(std::string_view row, std::uint32_t col, std::string v);

  AssocArray build() &&;

 private:
  std::uint32_t col_slot(std::string_view col);
  bool open_row(std::string_view row, std::uint32_t col);

  ValueKind kind_;
  bool universe_mode_ = false;
  AssocArray out_;
  std::vector<std::string> col_names_;  // first-seen order
  std::unordered_map<std::string, std::uint32_t> col_ids_;
  std::string probe_;
};

// Builds an array from parallel lists. Duplicate (row, col) pairs are merged
// with `collision`; when it is not given, Num arrays sum and Str arrays keep
// the last value.
AssocArray assoc_from_triples(std::span<const std::string> rows,
                              std::span<const std::string> cols,
                              std::span<const Value> vals,
                              std::optional<Collision> collision = {});

AssocArray assoc_from_triples(std::vector<Triple> triples,
                              std::optional<Collision> collision = {});

AssocArray assoc_from_num(std::span<const std::string> rows,
                          std::span<const std::string> cols,
                          std::span<const double> vals,
                          std::optional<Collision> collision = {});

AssocArray subref(const AssocArray& a, const KeySpec& rows, const KeySpec& cols);
AssocArray transpose(const AssocArray& a);

// Union: entries present in one operand pass through, shared entries are
// combined with `op`.
AssocArray ew_add(const AssocArray& a, const AssocArray& b,
                  BinaryOp op = BinaryOp::kPlus);

// Intersection: only entries present in both operands survive.
AssocArray ew_mult(const AssocArray& a, const AssocArray& b,
                   BinaryOp op = BinaryOp::kTimes);

// Every stored entry becomes Num 1.0.
AssocArray logical(const AssocArray& a);

inline bool equal(const AssocArray& a, const AssocArray& b) { return a == b; }

}  // namespace d4m
