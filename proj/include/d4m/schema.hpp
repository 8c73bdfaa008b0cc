#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "d4m/assoc.hpp"
#include "d4m/kernels.hpp"
#include "d4m/kvstore.hpp"
#include "d4m/memory.hpp"

namespace d4m {

inline constexpr std::string_view kTransposeSuffix = "_T";
inline constexpr std::string_view kDegreeSuffix = "_Deg";
inline constexpr std::string_view kDegreeColumn = "Degree";

// A bound table group: `<base>` (row -> col), `<base>_T` (its transpose) and
// `<base>_Deg` (per-row entry counts under a sum combiner).
struct TableRef {
  Store* store = nullptr;
  std::string base;
  Table* edge = nullptr;
  Table* edge_t = nullptr;
  Table* degree = nullptr;

  friend bool operator==(const TableRef&, const TableRef&) = default;
};

// Creates the three tables, or attaches to them when they already exist with
// the expected combiners.
TableRef bind(Store& store, std::string_view base);

// Writes each entry to the edge table and the transpose table, and counts
// it in the degree table when the cell was not already present.
void ingest_entries(const TableRef& ref, std::span<const TableEntry> entries);
void ingest_assoc(const TableRef& ref, const AssocArray& a);

// Raw stored entries matching the selectors, in (row, col) order. A column
// selection with an unrestricted row selector is answered from the transpose
// table so the edge table is never fully scanned for it.
std::vector<TableEntry> query_entries(const TableRef& ref, const KeySpec& rows,
                                      const KeySpec& cols);

// As query_entries, parsed into an array: Num when every value parses as a
// number, Str otherwise.
AssocArray query(const TableRef& ref, const KeySpec& rows, const KeySpec& cols);

// One-column array (column "Degree") of stored entry counts.
AssocArray degree(const TableRef& ref, const KeySpec& keys);

// Infers the array kind from stored text (Num iff every value parses).
AssocArray assoc_from_stored(std::span<const TableEntry> entries);

struct ExplodedCell {
  std::string row;
  std::string col_name;
  std::string col_value;

  friend bool operator==(const ExplodedCell&, const ExplodedCell&) = default;
};

// (row, "name<delim>value", "1"). The delimiter may not occur in the name.
TableEntry encode_exploded(std::string_view row, std::string_view col_name,
                           std::string_view col_value, char delim = '|');
// Splits on the first delimiter occurrence.
ExplodedCell decode_exploded(const TableEntry& entry, char delim = '|');

struct TableMultStats {
  std::uint64_t partial_products = 0;
  std::uint64_t inner_rows = 0;  // row keys present in both operands
  std::size_t peak_bytes = 0;
};

struct TableMultOptions {
  // Treat every operand value as 1 (structure-only multiply), so tables with
  // non-numeric values can be multiplied.
  bool logical = false;
};

// In-store multiply: C += A' * B. Both operand tables are streamed in row
// order; for every row key k present in both, the outer product of A(k,:)
// and B(k,:) is written into C as puts, and C's combiner performs the
// reduction. At most one row of each operand plus one bounded put batch is
// held at a time, and that is what `budget` is charged for.
//
// C must exist with the combiner matching the semiring's add operation.
// Throws ErrorCode::kMemoryCap if a row pair alone does not fit the budget.
TableMultStats tablemult(Store& store, std::string_view table_a, std::string_view table_b,
                         std::string_view table_c, const Semiring& sr, MemoryBudget& budget,
                         const TableMultOptions& opts = {});

// Combiner that reduces like the semiring's add operation.
Combiner combiner_for(const Semiring& sr);

}  // namespace d4m
