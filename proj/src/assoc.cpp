#include "d4m/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "d4m/error.hpp"

namespace d4m {
namespace {

double combine_num(BinaryOp op, double x, double y) {
  switch (op) {
    case BinaryOp::kPlus: return x + y;
    case BinaryOp::kTimes: return x * y;
    case BinaryOp::kMin: return std::min(x, y);
    case BinaryOp::kMax: return std::max(x, y);
    case BinaryOp::kLast: return y;
  }
  return y;
}

const std::string& combine_str(BinaryOp op, const std::string& x, const std::string& y) {
  switch (op) {
    case BinaryOp::kMin: return std::min(x, y);
    case BinaryOp::kMax: return std::max(x, y);
    default: return y;
  }
}

void check_binary_kinds(const AssocArray& a, const AssocArray& b, BinaryOp op) {
  if (a.kind() != b.kind()) {
    fail(ErrorCode::kKindMismatch, "element-wise operation on Num and Str arrays");
  }
  if (!a.is_num() && (op == BinaryOp::kPlus || op == BinaryOp::kTimes)) {
    fail(ErrorCode::kKindMismatch, "arithmetic operator applied to Str arrays");
  }
}

BinaryOp collision_op(Collision c) {
  switch (c) {
    case Collision::kSum: return BinaryOp::kPlus;
    case Collision::kMin: return BinaryOp::kMin;
    case Collision::kMax: return BinaryOp::kMax;
    case Collision::kLast: return BinaryOp::kLast;
  }
  return BinaryOp::kLast;
}

// Merges two sorted unique key lists. The maps send each operand's index to
// its position in the merged list.
std::vector<std::string> merge_keys(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b,
                                    std::vector<std::uint32_t>& a_map,
                                    std::vector<std::uint32_t>& b_map) {
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  a_map.resize(a.size());
  b_map.resize(b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const auto slot = static_cast<std::uint32_t>(out.size());
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      a_map[i] = slot;
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      b_map[j] = slot;
      out.push_back(b[j++]);
    } else {
      a_map[i] = slot;
      b_map[j] = slot;
      out.push_back(a[i++]);
      ++j;
    }
  }
  return out;
}

}  // namespace

Value AssocArray::value(std::size_t e) const {
  if (is_num()) return num_[e];
  return str_[e];
}

std::optional<std::size_t> AssocArray::find_row(std::string_view key) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), key);
  if (it == rows_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - rows_.begin());
}

std::optional<std::size_t> AssocArray::find_col(std::string_view key) const {
  auto it = std::lower_bound(cols_.begin(), cols_.end(), key);
  if (it == cols_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - cols_.begin());
}

std::optional<Value> AssocArray::at(std::string_view row, std::string_view col) const {
  auto r = find_row(row);
  auto c = find_col(col);
  if (!r || !c) return std::nullopt;
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[*r]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[*r + 1]);
  auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(*c));
  if (it == last || *it != *c) return std::nullopt;
  return value(static_cast<std::size_t>(it - col_idx_.begin()));
}

std::vector<Triple> AssocArray::to_triples() const {
  std::vector<Triple> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) {
      out.push_back(Triple{rows_[r], cols_[col_idx_[e]], value(e)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// AssocBuilder

AssocBuilder::AssocBuilder(ValueKind kind, std::vector<std::string> col_universe)
    : kind_(kind), universe_mode_(true), col_names_(std::move(col_universe)) {}

std::uint32_t AssocBuilder::col_slot(std::string_view col) {
  probe_.assign(col);
  auto [it, inserted] =
      col_ids_.try_emplace(probe_, static_cast<std::uint32_t>(col_names_.size()));
  if (inserted) col_names_.push_back(probe_);
  return it->second;
}

// Returns false when the entry breaks row-major order.
bool AssocBuilder::open_row(std::string_view row, std::uint32_t col) {
  auto& rows = out_.rows_;
  if (rows.empty() || rows.back() != row) {
    if (!rows.empty() && row < rows.back()) return false;
    if (!rows.empty()) out_.row_ptr_.push_back(out_.col_idx_.size());
    rows.emplace_back(row);
    return true;
  }
  const std::uint32_t prev = out_.col_idx_.back();
  if (universe_mode_) return prev < col;
  return col_names_[prev] < col_names_[col];
}

void AssocBuilder::add_num_at(std::string_view row, std::uint32_t col, double v) {
  if (v == 0.0) return;
  if (std::isnan(v)) fail(ErrorCode::kInvalidArgument, "NaN value");
  if (kind_ != ValueKind::kNum) fail(ErrorCode::kKindMismatch, "Num value in Str array");
  if (!open_row(row, col)) fail(ErrorCode::kInvalidArgument, "entries out of row-major order");
  out_.col_idx_.push_back(col);
  out_.num_.push_back(v);
}

void AssocBuilder::add_str_at(std::string_view row, std::uint32_t col, std::string v) {
  if (v.empty()) return;
  if (kind_ != ValueKind::kStr) fail(ErrorCode::kKindMismatch, "Str value in Num array");
  if (!open_row(row, col)) fail(ErrorCode::kInvalidArgument, "entries out of row-major order");
  out_.col_idx_.push_back(col);
  out_.str_.push_back(std::move(v));
}

void AssocBuilder::add_num(std::string_view row, std::string_view col, double v) {
  if (v == 0.0) return;
  add_num_at(row, col_slot(col), v);
}

void AssocBuilder::add_str(std::string_view row, std::string_view col, std::string v) {
  if (v.empty()) return;
  add_str_at(row, col_slot(col), std::move(v));
}

void AssocBuilder::add(std::string_view row, std::string_view col, Value v) {
  if (auto* d = std::get_if<double>(&v)) {
    add_num(row, col, *d);
  } else {
    add_str(row, col, std::move(std::get<std::string>(v)));
  }
}

AssocArray AssocBuilder::build() && {
  out_.kind_ = kind_;
  if (!out_.rows_.empty()) out_.row_ptr_.push_back(out_.col_idx_.size());

  const std::size_t n = col_names_.size();
  std::vector<std::uint32_t> remap(n, 0);
  std::vector<char> used(n, 0);
  for (auto c : out_.col_idx_) used[c] = 1;

  if (universe_mode_) {
    std::uint32_t next = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!used[c]) continue;
      remap[c] = next++;
      out_.cols_.push_back(std::move(col_names_[c]));
    }
  } else {
    // Every name was introduced by an entry, so all are used.
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [this](std::uint32_t x, std::uint32_t y) {
      return col_names_[x] < col_names_[y];
    });
    out_.cols_.reserve(n);
    for (std::uint32_t pos = 0; pos < n; ++pos) {
      remap[order[pos]] = pos;
      out_.cols_.push_back(std::move(col_names_[order[pos]]));
    }
  }
  for (auto& c : out_.col_idx_) c = remap[c];
  return std::move(out_);
}

// ---------------------------------------------------------------------------
// Construction

namespace {

AssocArray build_from_sorted(std::vector<std::size_t>& order,
                             std::span<const std::string> rows,
                             std::span<const std::string> cols,
                             ValueKind kind, Collision collision,
                             auto&& value_at) {
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    int c = rows[x].compare(rows[y]);
    if (c != 0) return c < 0;
    return cols[x] < cols[y];
  });

  const BinaryOp op = collision_op(collision);
  AssocBuilder builder(kind);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    Value acc = value_at(order[i]);
    while (j < order.size() && rows[order[j]] == rows[order[i]] &&
           cols[order[j]] == cols[order[i]]) {
      Value next = value_at(order[j]);
      if (kind == ValueKind::kNum) {
        acc = combine_num(op, std::get<double>(acc), std::get<double>(next));
      } else {
        acc = combine_str(op, std::get<std::string>(acc), std::get<std::string>(next));
      }
      ++j;
    }
    builder.add(rows[order[i]], cols[order[i]], std::move(acc));
    i = j;
  }
  return std::move(builder).build();
}

void check_lengths(std::size_t r, std::size_t c, std::size_t v) {
  if (r != c || r != v) {
    fail(ErrorCode::kInvalidArgument, "row, column and value lists differ in length");
  }
}

}  // namespace

AssocArray assoc_from_triples(std::span<const std::string> rows,
                              std::span<const std::string> cols,
                              std::span<const Value> vals,
                              std::optional<Collision> collision) {
  check_lengths(rows.size(), cols.size(), vals.size());
  if (vals.empty()) return AssocArray();

  const ValueKind kind = kind_of(vals[0]);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    validate_key(rows[i]);
    validate_key(cols[i]);
    if (kind_of(vals[i]) != kind) {
      fail(ErrorCode::kKindMismatch, "mixed Num and Str values");
    }
    if (kind == ValueKind::kNum) {
      if (std::isnan(std::get<double>(vals[i]))) fail(ErrorCode::kInvalidArgument, "NaN value");
    } else {
      validate_value_text(std::get<std::string>(vals[i]));
    }
  }
  const Collision c = collision.value_or(kind == ValueKind::kNum ? Collision::kSum
                                                                  : Collision::kLast);
  if (kind == ValueKind::kStr && c == Collision::kSum) {
    fail(ErrorCode::kKindMismatch, "sum collision is only defined for Num values");
  }
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return build_from_sorted(order, rows, cols, kind, c,
                           [&](std::size_t k) { return vals[k]; });
}

AssocArray assoc_from_num(std::span<const std::string> rows,
                          std::span<const std::string> cols,
                          std::span<const double> vals,
                          std::optional<Collision> collision) {
  check_lengths(rows.size(), cols.size(), vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    validate_key(rows[i]);
    validate_key(cols[i]);
    if (std::isnan(vals[i])) fail(ErrorCode::kInvalidArgument, "NaN value");
  }
  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return build_from_sorted(order, rows, cols, ValueKind::kNum,
                           collision.value_or(Collision::kSum),
                           [&](std::size_t k) { return Value(vals[k]); });
}

AssocArray assoc_from_triples(std::vector<Triple> triples,
                              std::optional<Collision> collision) {
  std::vector<std::string> rows, cols;
  std::vector<Value> vals;
  rows.reserve(triples.size());
  cols.reserve(triples.size());
  vals.reserve(triples.size());
  for (auto& t : triples) {
    rows.push_back(std::move(t.row));
    cols.push_back(std::move(t.col));
    vals.push_back(std::move(t.value));
  }
  return assoc_from_triples(rows, cols, vals, collision);
}

// ---------------------------------------------------------------------------
// Structural operations

AssocArray subref(const AssocArray& a, const KeySpec& rows, const KeySpec& cols) {
  if (rows.is_all() && cols.is_all()) return a;

  const auto& rk = a.row_keys();
  std::vector<std::size_t> picked;
  if (rows.is_all()) {
    picked.resize(rk.size());
    std::iota(picked.begin(), picked.end(), std::size_t{0});
  } else if (rows.is_list()) {
    for (const auto& k : rows.keys()) {
      if (auto r = a.find_row(k)) picked.push_back(*r);
    }
  } else {
    auto lo = std::lower_bound(rk.begin(), rk.end(), rows.key_range().first);
    auto hi = std::upper_bound(rk.begin(), rk.end(), rows.key_range().last);
    for (auto it = lo; it < hi; ++it) picked.push_back(static_cast<std::size_t>(it - rk.begin()));
  }

  std::vector<char> keep_col(a.col_keys().size(), 1);
  if (!cols.is_all()) {
    for (std::size_t c = 0; c < keep_col.size(); ++c) {
      keep_col[c] = cols.matches(a.col_keys()[c]) ? 1 : 0;
    }
  }

  AssocBuilder out(a.kind(), a.col_keys());
  for (std::size_t r : picked) {
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) {
      const auto c = a.col_index(e);
      if (!keep_col[c]) continue;
      if (a.is_num()) {
        out.add_num_at(rk[r], c, a.num(e));
      } else {
        out.add_str_at(rk[r], c, a.str(e));
      }
    }
  }
  return std::move(out).build();
}

AssocArray transpose(const AssocArray& a) {
  AssocArray t;
  t.kind_ = a.kind_;
  t.rows_ = a.cols_;
  t.cols_ = a.rows_;
  const std::size_t nr = a.cols_.size();
  t.row_ptr_.assign(nr + 1, 0);
  for (auto c : a.col_idx_) ++t.row_ptr_[c + 1];
  std::partial_sum(t.row_ptr_.begin(), t.row_ptr_.end(), t.row_ptr_.begin());

  std::vector<std::size_t> cursor(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  t.col_idx_.resize(a.nnz());
  if (a.is_num()) {
    t.num_.resize(a.nnz());
  } else {
    t.str_.resize(a.nnz());
  }
  for (std::size_t r = 0; r < a.rows_.size(); ++r) {
    for (std::size_t e = a.row_ptr_[r]; e < a.row_ptr_[r + 1]; ++e) {
      const std::size_t dst = cursor[a.col_idx_[e]]++;
      t.col_idx_[dst] = static_cast<std::uint32_t>(r);
      if (a.is_num()) {
        t.num_[dst] = a.num_[e];
      } else {
        t.str_[dst] = a.str_[e];
      }
    }
  }
  return t;
}

AssocArray logical(const AssocArray& a) {
  AssocArray out;
  out.kind_ = ValueKind::kNum;
  out.rows_ = a.rows_;
  out.cols_ = a.cols_;
  out.row_ptr_ = a.row_ptr_;
  out.col_idx_ = a.col_idx_;
  out.num_.assign(a.nnz(), 1.0);
  return out;
}

// Walks the rows of both operands in key order. `union_rows` selects whether
// rows present in only one operand are visited.
template <typename RowFn>
static void walk_rows(const AssocArray& a, const AssocArray& b, bool union_rows, RowFn&& fn) {
  const auto& ra = a.row_keys();
  const auto& rb = b.row_keys();
  std::size_t i = 0, j = 0;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  while (i < ra.size() || j < rb.size()) {
    if (j == rb.size() || (i < ra.size() && ra[i] < rb[j])) {
      if (union_rows) fn(ra[i], i, kNone);
      ++i;
    } else if (i == ra.size() || rb[j] < ra[i]) {
      if (union_rows) fn(rb[j], kNone, j);
      ++j;
    } else {
      fn(ra[i], i, j);
      ++i;
      ++j;
    }
  }
}

AssocArray ew_add(const AssocArray& a, const AssocArray& b, BinaryOp op) {
  check_binary_kinds(a, b, op);
  std::vector<std::uint32_t> amap, bmap;
  auto universe = merge_keys(a.col_keys(), b.col_keys(), amap, bmap);
  AssocBuilder out(a.kind(), std::move(universe));
  const bool num = a.is_num();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  auto emit = [&](const std::string& row, const AssocArray& src, std::size_t e,
                  std::uint32_t col) {
    if (num) {
      out.add_num_at(row, col, src.num(e));
    } else {
      out.add_str_at(row, col, src.str(e));
    }
  };

  walk_rows(a, b, true, [&](const std::string& row, std::size_t ia, std::size_t ib) {
    std::size_t ea = ia == kNone ? 0 : a.row_begin(ia);
    std::size_t la = ia == kNone ? 0 : a.row_end(ia);
    std::size_t eb = ib == kNone ? 0 : b.row_begin(ib);
    std::size_t lb = ib == kNone ? 0 : b.row_end(ib);
    while (ea < la || eb < lb) {
      const std::uint32_t ca = ea < la ? amap[a.col_index(ea)] : UINT32_MAX;
      const std::uint32_t cb = eb < lb ? bmap[b.col_index(eb)] : UINT32_MAX;
      if (ca < cb) {
        emit(row, a, ea++, ca);
      } else if (cb < ca) {
        emit(row, b, eb++, cb);
      } else {
        if (num) {
          out.add_num_at(row, ca, combine_num(op, a.num(ea), b.num(eb)));
        } else {
          out.add_str_at(row, ca, combine_str(op, a.str(ea), b.str(eb)));
        }
        ++ea;
        ++eb;
      }
    }
  });
  return std::move(out).build();
}

AssocArray ew_mult(const AssocArray& a, const AssocArray& b, BinaryOp op) {
  check_binary_kinds(a, b, op);
  std::vector<std::uint32_t> amap, bmap;
  auto universe = merge_keys(a.col_keys(), b.col_keys(), amap, bmap);
  AssocBuilder out(a.kind(), std::move(universe));
  const bool num = a.is_num();

  walk_rows(a, b, false, [&](const std::string& row, std::size_t ia, std::size_t ib) {
    std::size_t ea = a.row_begin(ia), la = a.row_end(ia);
    std::size_t eb = b.row_begin(ib), lb = b.row_end(ib);
    while (ea < la && eb < lb) {
      const std::uint32_t ca = amap[a.col_index(ea)];
      const std::uint32_t cb = bmap[b.col_index(eb)];
      if (ca < cb) {
        ++ea;
      } else if (cb < ca) {
        ++eb;
      } else {
        if (num) {
          out.add_num_at(row, ca, combine_num(op, a.num(ea), b.num(eb)));
        } else {
          out.add_str_at(row, ca, combine_str(op, a.str(ea), b.str(eb)));
        }
        ++ea;
        ++eb;
      }
    }
  });
  return std::move(out).build();
}

}  // namespace d4m
