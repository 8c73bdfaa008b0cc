#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "d4m/keys.hpp"
#include "d4m/triple_file.hpp"

namespace d4m {

enum class Combiner { kNone, kSum, kMin, kMax, kLast };

std::string_view combiner_name(Combiner c);
std::optional<Combiner> combiner_from_name(std::string_view name);
inline bool is_numeric(Combiner c) {
  return c == Combiner::kSum || c == Combiner::kMin || c == Combiner::kMax;
}

// Scan-time transform applied to each row after range filtering, column
// filtering and combining. It receives the entries of one row and appends
// its output, which must stay in (row, col) order. It must not keep state
// between calls.
using RowIterator =
    std::function<void(std::span<const TableEntry> row, std::vector<TableEntry>& out)>;

namespace kv {

// Pending state of one cell. `deletes_older` hides every older version of
// the cell; `value` (when present) is the combined value of the newer puts.
struct CellState {
  std::string value;
  bool has_value = false;
  bool deletes_older = false;
};

struct Cell {
  std::string row;
  std::string col;
  CellState state;
};

// Immutable sorted run of cells, unique per (row, col).
struct Run {
  std::vector<Cell> cells;
};

struct CellKey {
  std::string row;
  std::string col;
};

struct CellKeyLess {
  using is_transparent = void;
  template <typename A, typename B>
  bool operator()(const A& a, const B& b) const {
    int c = std::string_view(a.row).compare(std::string_view(b.row));
    if (c != 0) return c < 0;
    return std::string_view(a.col) < std::string_view(b.col);
  }
};

struct KeyView {
  std::string_view row;
  std::string_view col;
};

}  // namespace kv

class Table;

// Ordered stream of entries over a consistent snapshot captured when the
// scan started. Later writes to the table are not observed.
class Scanner {
 public:
  std::optional<TableEntry> next();
  // Fills `row` with every entry of the next row; false at end of stream.
  bool next_row(std::vector<TableEntry>& row);

 private:
  friend class Table;
  struct Cursor {
    const kv::Run* run;
    std::size_t pos;
  };

  bool fill();
  bool merge_next(TableEntry& out);
  void seek_range();

  std::vector<std::shared_ptr<const kv::Run>> sources_;  // oldest first
  std::vector<Cursor> cursors_;
  std::vector<KeyRange> ranges_;
  bool unbounded_ = false;
  std::size_t range_idx_ = 0;
  KeySpec cols_;
  Combiner combiner_ = Combiner::kNone;
  RowIterator iterator_;

  std::vector<TableEntry> pending_;
  std::size_t pending_pos_ = 0;
  std::optional<TableEntry> lookahead_;
  std::optional<TableEntry> peek_;
  std::vector<TableEntry> row_buf_;
  bool done_ = false;
};

// One sorted table: committed immutable runs plus a write buffer. The
// table's combiner merges duplicate cells at buffer insert, flush,
// compaction and scan, so results never depend on flush placement.
class Table {
 public:
  Table(std::string name, Combiner combiner);

  const std::string& name() const noexcept { return name_; }
  Combiner combiner() const noexcept { return combiner_; }

  void put(std::string_view row, std::string_view col, std::string_view value);
  void put_batch(std::span<const TableEntry> entries);
  // Same effect as putting the entries in order and then flushing, but the
  // entries are sorted and committed as one run without passing through the
  // write buffer. `on_new` (when set) sees every distinct cell that held no
  // visible value before the call.
  void bulk_put(std::span<const TableEntry> entries,
                const std::function<void(std::string_view row, std::string_view col)>& on_new =
                    {});
  void remove(std::string_view row, std::string_view col);
  void delete_entries(std::span<const std::pair<std::string, std::string>> cells);

  // Moves the write buffer into a new committed run.
  void flush();
  // Merges every committed run (after a flush) into a single run; tombstones
  // are applied and dropped.
  void compact();

  Scanner scan(const KeySpec& rows = {}, const KeySpec& cols = {},
               RowIterator iterator = {}) const;
  std::vector<TableEntry> scan_all(const KeySpec& rows = {}, const KeySpec& cols = {},
                                   RowIterator iterator = {}) const;

  std::optional<std::string> get(std::string_view row, std::string_view col) const;

  std::uint64_t scan_count() const noexcept { return scans_.load(); }
  std::size_t run_count() const;
  std::size_t buffered() const;

  // Buffer size that triggers an automatic flush, and run count that
  // triggers an automatic compaction.
  void set_auto_flush(std::size_t buffer_cells, std::size_t max_runs);

  // Installs a pre-sorted, unique run as committed content (snapshot load).
  void install_run(std::vector<TableEntry> sorted_entries);

 private:
  std::string canonical_value(std::string_view value) const;
  void insert_locked(std::string_view row, std::string_view col, kv::CellState incoming);
  bool visible_in_runs_locked(std::string_view row, std::string_view col) const;
  void flush_locked();
  void compact_locked();
  void maybe_flush_locked();

  const std::string name_;
  const Combiner combiner_;

  mutable std::shared_mutex mu_;
  std::vector<std::shared_ptr<const kv::Run>> runs_;
  std::map<kv::CellKey, kv::CellState, kv::CellKeyLess> buffer_;
  std::size_t flush_threshold_ = std::size_t{1} << 16;
  std::size_t max_runs_ = 8;
  mutable std::atomic<std::uint64_t> scans_{0};
};

// Merges `newer` over `older` under `combiner`.
kv::CellState merge_cells(Combiner combiner, const kv::CellState& older,
                          const kv::CellState& newer);
std::string combine_values(Combiner combiner, std::string_view older, std::string_view newer);

// Named collection of tables with directory snapshots:
// `<dir>/MANIFEST.tsv` (table<TAB>combiner) and `<dir>/<table>.tsv`.
class Store {
 public:
  Store() = default;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  Table& create_table(const std::string& name, Combiner combiner);
  Table* find_table(std::string_view name);
  const Table* find_table(std::string_view name) const;
  Table& table(std::string_view name);
  const Table& table(std::string_view name) const;
  bool has_table(std::string_view name) const { return find_table(name) != nullptr; }
  void drop_table(std::string_view name);
  std::vector<std::string> table_names() const;

  void save(const std::filesystem::path& dir) const;
  void load(const std::filesystem::path& dir);

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Table>, std::less<>> tables_;
};

bool is_valid_table_name(std::string_view name) noexcept;

}  // namespace d4m
