#include "d4m/schema.hpp"

#include <algorithm>

#include "d4m/error.hpp"

namespace d4m {
namespace {

Table& attach(Store& store, const std::string& name, Combiner combiner) {
  if (Table* t = store.find_table(name)) {
    if (t->combiner() != combiner) {
      fail(ErrorCode::kConflict, "table " + name + " exists with combiner " +
                                     std::string(combiner_name(t->combiner())) + ", expected " +
                                     std::string(combiner_name(combiner)));
    }
    return *t;
  }
  return store.create_table(name, combiner);
}

}  // namespace

TableRef bind(Store& store, std::string_view base) {
  const std::string b(base);
  if (!is_valid_table_name(b)) fail(ErrorCode::kInvalidArgument, "bad table name '" + b + "'");
  TableRef ref;
  ref.store = &store;
  ref.base = b;
  ref.edge = &attach(store, b, Combiner::kNone);
  ref.edge_t = &attach(store, b + std::string(kTransposeSuffix), Combiner::kNone);
  ref.degree = &attach(store, b + std::string(kDegreeSuffix), Combiner::kSum);
  return ref;
}

void ingest_entries(const TableRef& ref, std::span<const TableEntry> entries) {
  // Chunks go in as bulk runs; the transpose and degree tables follow each
  // chunk so all three stay consistent at chunk boundaries.
  constexpr std::size_t kChunk = std::size_t{1} << 16;
  std::vector<TableEntry> flipped;
  std::vector<TableEntry> degree_puts;
  for (std::size_t lo = 0; lo < entries.size(); lo += kChunk) {
    const auto chunk = entries.subspan(lo, std::min(kChunk, entries.size() - lo));
    std::string last_row;
    std::uint64_t added = 0;
    degree_puts.clear();
    auto emit = [&] {
      if (added != 0) {
        degree_puts.push_back(
            TableEntry{last_row, std::string(kDegreeColumn), std::to_string(added)});
      }
    };
    // New cells are reported in sorted order, so each row's are adjacent.
    ref.edge->bulk_put(chunk, [&](std::string_view row, std::string_view) {
      if (row != last_row) {
        emit();
        last_row = row;
        added = 0;
      }
      ++added;
    });
    emit();

    flipped.clear();
    flipped.reserve(chunk.size());
    for (const auto& e : chunk) flipped.push_back(TableEntry{e.col, e.row, e.value});
    ref.edge_t->bulk_put(flipped);
    ref.degree->bulk_put(degree_puts);
  }
}

void ingest_assoc(const TableRef& ref, const AssocArray& a) {
  std::vector<TableEntry> batch;
  const auto& rows = a.row_keys();
  const auto& cols = a.col_keys();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) {
      batch.push_back(TableEntry{rows[r], cols[a.col_index(e)],
                                 a.is_num() ? format_number(a.num(e)) : a.str(e)});
    }
    if (batch.size() >= 4096) {
      ingest_entries(ref, batch);
      batch.clear();
    }
  }
  ingest_entries(ref, batch);
}

std::vector<TableEntry> query_entries(const TableRef& ref, const KeySpec& rows,
                                      const KeySpec& cols) {
  if (!rows.is_all() || cols.is_all()) return ref.edge->scan_all(rows, cols);

  auto out = ref.edge_t->scan_all(cols, KeySpec::all());
  for (auto& e : out) std::swap(e.row, e.col);
  std::sort(out.begin(), out.end(), kv::CellKeyLess{});
  return out;
}

AssocArray assoc_from_stored(std::span<const TableEntry> entries) {
  std::vector<double> nums;
  nums.reserve(entries.size());
  for (const auto& e : entries) {
    auto v = parse_number(e.value);
    if (!v) break;
    nums.push_back(*v);
  }
  const bool numeric = nums.size() == entries.size();
  AssocBuilder out(numeric ? ValueKind::kNum : ValueKind::kStr);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (numeric) {
      out.add_num(entries[i].row, entries[i].col, nums[i]);
    } else {
      out.add_str(entries[i].row, entries[i].col, entries[i].value);
    }
  }
  return std::move(out).build();
}

AssocArray query(const TableRef& ref, const KeySpec& rows, const KeySpec& cols) {
  return assoc_from_stored(query_entries(ref, rows, cols));
}

AssocArray degree(const TableRef& ref, const KeySpec& keys) {
  return assoc_from_stored(
      ref.degree->scan_all(keys, KeySpec::list({std::string(kDegreeColumn)})));
}

TableEntry encode_exploded(std::string_view row, std::string_view col_name,
                           std::string_view col_value, char delim) {
  if (col_name.find(delim) != std::string_view::npos) {
    fail(ErrorCode::kInvalidArgument, "delimiter occurs in column name '" +
                                          std::string(col_name) + "'");
  }
  TableEntry e{std::string(row), std::string(col_name), "1"};
  e.col.push_back(delim);
  e.col.append(col_value);
  validate_key(e.row);
  validate_key(e.col);
  return e;
}

ExplodedCell decode_exploded(const TableEntry& entry, char delim) {
  const auto pos = entry.col.find(delim);
  if (pos == std::string::npos) {
    fail(ErrorCode::kParse, "column key '" + entry.col + "' has no delimiter");
  }
  return ExplodedCell{entry.row, entry.col.substr(0, pos), entry.col.substr(pos + 1)};
}

Combiner combiner_for(const Semiring& sr) {
  switch (sr.add) {
    case AddOp::kPlus: return Combiner::kSum;
    case AddOp::kMin: return Combiner::kMin;
    case AddOp::kMax: return Combiner::kMax;
  }
  return Combiner::kSum;
}

// ---------------------------------------------------------------------------
// TableMult

namespace {

// A row held in memory, with its charge against the budget.
struct HeldRow {
  std::vector<TableEntry> entries;
  std::vector<double> values;
  std::size_t bytes = 0;
  bool valid = false;
};

// Pending partial products are written to C at most this many at a time,
// whatever the budget allows.
constexpr std::size_t kMaxBatchEntries = 4096;

class PutBatch {
 public:
  PutBatch(Table& dest, MemoryBudget& budget) : dest_(dest), budget_(budget) {}

  // False when the entry cannot be charged even after flushing.
  bool add(const std::string& row, const std::string& col, double v) {
    const std::size_t bytes = entry_bytes(row, col, kNumValueBytes);
    if (!budget_.try_charge(bytes)) {
      flush();
      if (!budget_.try_charge(bytes)) return false;
    }
    pending_.push_back(TableEntry{row, col, format_number(v)});
    bytes_ += bytes;
    if (pending_.size() >= kMaxBatchEntries) flush();
    return true;
  }

  void flush() {
    if (pending_.empty()) return;
    dest_.put_batch(pending_);
    pending_.clear();
    budget_.release(bytes_);
    bytes_ = 0;
  }

 private:
  Table& dest_;
  MemoryBudget& budget_;
  std::vector<TableEntry> pending_;
  std::size_t bytes_ = 0;
};

}  // namespace

TableMultStats tablemult(Store& store, std::string_view table_a, std::string_view table_b,
                         std::string_view table_c, const Semiring& sr, MemoryBudget& budget,
                         const TableMultOptions& opts) {
  const Table& a = store.table(table_a);
  const Table& b = store.table(table_b);
  Table& c = store.table(table_c);
  if (c.combiner() != combiner_for(sr)) {
    fail(ErrorCode::kConflict, "table " + c.name() + " has combiner " +
                                   std::string(combiner_name(c.combiner())) +
                                   " which does not reduce like " + sr.name());
  }

  TableMultStats stats;
  PutBatch batch(c, budget);
  HeldRow ra, rb;

  auto load = [&](Scanner& scan, HeldRow& held, const Table& src) {
    budget.release(held.bytes);
    held.bytes = 0;
    held.valid = scan.next_row(held.entries);
    if (!held.valid) return;
    std::size_t bytes = 0;
    held.values.clear();
    for (const auto& e : held.entries) {
      bytes += entry_bytes(e.row, e.col, e.value.size());
      if (opts.logical) {
        held.values.push_back(1.0);
        continue;
      }
      auto v = parse_number(e.value);
      if (!v) {
        fail(ErrorCode::kParse, "table " + src.name() + ": value '" + e.value + "' at (" +
                                    e.row + ", " + e.col + ") is not numeric");
      }
      held.values.push_back(*v);
    }
    if (!budget.try_charge(bytes)) {
      batch.flush();
      if (!budget.try_charge(bytes)) {
        fail(ErrorCode::kMemoryCap, "row '" + held.entries.front().row + "' of table " +
                                        src.name() + " (" + std::to_string(bytes) +
                                        " bytes) does not fit the memory cap of " +
                                        std::to_string(budget.cap()) + " bytes");
      }
    }
    held.bytes = bytes;
  };

  Scanner sa = a.scan();
  Scanner sb = b.scan();
  load(sa, ra, a);
  load(sb, rb, b);
  while (ra.valid && rb.valid) {
    const auto& ka = ra.entries.front().row;
    const auto& kb = rb.entries.front().row;
    if (ka < kb) {
      load(sa, ra, a);
      continue;
    }
    if (kb < ka) {
      load(sb, rb, b);
      continue;
    }
    ++stats.inner_rows;
    for (std::size_t i = 0; i < ra.entries.size(); ++i) {
      for (std::size_t j = 0; j < rb.entries.size(); ++j) {
        const double p = sr.multiply(ra.values[i], rb.values[j]);
        if (!batch.add(ra.entries[i].col, rb.entries[j].col, p)) {
          fail(ErrorCode::kMemoryCap, "row pair '" + ka +
                                          "' leaves no room for a partial product under the "
                                          "memory cap of " +
                                          std::to_string(budget.cap()) + " bytes");
        }
        ++stats.partial_products;
      }
    }
    load(sa, ra, a);
    load(sb, rb, b);
  }
  batch.flush();
  budget.release(ra.bytes + rb.bytes);
  c.flush();
  stats.peak_bytes = budget.peak();
  return stats;
}

}  // namespace d4m
