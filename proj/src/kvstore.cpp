#include "d4m/kvstore.hpp"

#include <algorithm>
#include <fstream>

#include "d4m/error.hpp"
#include "d4m/value.hpp"

namespace d4m {

using kv::Cell;
using kv::CellState;
using kv::KeyView;
using kv::Run;

std::string_view combiner_name(Combiner c) {
  switch (c) {
    case Combiner::kNone: return "none";
    case Combiner::kSum: return "sum";
    case Combiner::kMin: return "min";
    case Combiner::kMax: return "max";
    case Combiner::kLast: return "last";
  }
  return "none";
}

std::optional<Combiner> combiner_from_name(std::string_view name) {
  for (Combiner c : {Combiner::kNone, Combiner::kSum, Combiner::kMin, Combiner::kMax,
                     Combiner::kLast}) {
    if (combiner_name(c) == name) return c;
  }
  return std::nullopt;
}

bool is_valid_table_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
           ch == '_';
  });
}

std::string combine_values(Combiner combiner, std::string_view older, std::string_view newer) {
  if (!is_numeric(combiner)) return std::string(newer);
  auto x = parse_number(older);
  auto y = parse_number(newer);
  if (!x || !y) fail(ErrorCode::kParse, "non-numeric value under a numeric combiner");
  double r = 0.0;
  switch (combiner) {
    case Combiner::kSum: r = *x + *y; break;
    case Combiner::kMin: r = std::min(*x, *y); break;
    default: r = std::max(*x, *y); break;
  }
  return format_number(r);
}

CellState merge_cells(Combiner combiner, const CellState& older, const CellState& newer) {
  if (newer.deletes_older) return newer;
  if (!newer.has_value) return older;
  if (!older.has_value) return CellState{newer.value, true, older.deletes_older};
  return CellState{combine_values(combiner, older.value, newer.value), true,
                   older.deletes_older};
}

// ---------------------------------------------------------------------------
// Scanner

void Scanner::seek_range() {
  for (auto& c : cursors_) {
    if (unbounded_) {
      c.pos = 0;
      continue;
    }
    const auto& cells = c.run->cells;
    const std::string& first = ranges_[range_idx_].first;
    auto it = std::lower_bound(cells.begin(), cells.end(), first,
                               [](const Cell& cell, const std::string& key) {
                                 return cell.row < key;
                               });
    c.pos = static_cast<std::size_t>(it - cells.begin());
  }
}

bool Scanner::merge_next(TableEntry& out) {
  while (true) {
    if (!unbounded_ && range_idx_ >= ranges_.size()) return false;

    const Cell* best = nullptr;
    for (const auto& c : cursors_) {
      if (c.pos >= c.run->cells.size()) continue;
      const Cell& cell = c.run->cells[c.pos];
      if (!unbounded_ && ranges_[range_idx_].last < cell.row) continue;
      if (!best || kv::CellKeyLess{}(cell, *best)) best = &cell;
    }
    if (!best) {
      if (unbounded_) return false;
      if (++range_idx_ >= ranges_.size()) return false;
      seek_range();
      continue;
    }

    // `best` points into a run that stays alive for the scanner's lifetime.
    const std::string& row = best->row;
    const std::string& col = best->col;
    CellState state;
    for (auto& c : cursors_) {
      if (c.pos >= c.run->cells.size()) continue;
      const Cell& cell = c.run->cells[c.pos];
      if (cell.row == row && cell.col == col) {
        state = merge_cells(combiner_, state, cell.state);
        ++c.pos;
      }
    }
    if (!state.has_value || !cols_.matches(col)) continue;
    out.row = row;
    out.col = col;
    out.value = std::move(state.value);
    return true;
  }
}

bool Scanner::fill() {
  pending_.clear();
  pending_pos_ = 0;
  while (pending_.empty()) {
    if (done_) return false;
    row_buf_.clear();
    if (lookahead_) {
      row_buf_.push_back(std::move(*lookahead_));
      lookahead_.reset();
    } else {
      TableEntry e;
      if (!merge_next(e)) {
        done_ = true;
        return false;
      }
      row_buf_.push_back(std::move(e));
    }
    TableEntry e;
    while (merge_next(e)) {
      if (e.row != row_buf_.front().row) {
        lookahead_ = std::move(e);
        break;
      }
      row_buf_.push_back(std::move(e));
    }
    iterator_(row_buf_, pending_);
    for (std::size_t i = 1; i < pending_.size(); ++i) {
      if (!kv::CellKeyLess{}(pending_[i - 1], pending_[i])) {
        fail(ErrorCode::kInvalidArgument, "scan iterator produced out-of-order entries");
      }
    }
  }
  return true;
}

std::optional<TableEntry> Scanner::next() {
  if (!iterator_) {
    TableEntry e;
    if (!merge_next(e)) return std::nullopt;
    return e;
  }
  if (pending_pos_ >= pending_.size() && !fill()) return std::nullopt;
  return std::move(pending_[pending_pos_++]);
}

bool Scanner::next_row(std::vector<TableEntry>& row) {
  row.clear();
  std::optional<TableEntry> first = std::move(peek_);
  peek_.reset();
  if (!first) first = next();
  if (!first) return false;
  row.push_back(std::move(*first));
  while (auto e = next()) {
    if (e->row != row.front().row) {
      peek_ = std::move(e);
      break;
    }
    row.push_back(std::move(*e));
  }
  return true;
}

// ---------------------------------------------------------------------------
// Table

Table::Table(std::string name, Combiner combiner)
    : name_(std::move(name)), combiner_(combiner) {}

std::string Table::canonical_value(std::string_view value) const {
  if (is_numeric(combiner_)) {
    auto v = parse_number(value);
    if (!v) {
      fail(ErrorCode::kParse, "table " + name_ + ": value '" + std::string(value) +
                                  "' is not numeric but the combiner is " +
                                  std::string(combiner_name(combiner_)));
    }
    return format_number(*v);
  }
  validate_value_text(value);
  return std::string(value);
}

void Table::insert_locked(std::string_view row, std::string_view col, CellState incoming) {
  auto it = buffer_.find(KeyView{row, col});
  if (it != buffer_.end()) {
    it->second = merge_cells(combiner_, it->second, incoming);
  } else {
    buffer_.emplace(kv::CellKey{std::string(row), std::string(col)}, std::move(incoming));
  }
}

void Table::maybe_flush_locked() {
  if (buffer_.size() >= flush_threshold_) flush_locked();
}

void Table::put(std::string_view row, std::string_view col, std::string_view value) {
  validate_key(row);
  validate_key(col);
  CellState s{canonical_value(value), true, false};
  std::unique_lock lock(mu_);
  insert_locked(row, col, std::move(s));
  maybe_flush_locked();
}

// The newest run holding the cell decides: a value there is visible, a bare
// tombstone hides the older runs.
bool Table::visible_in_runs_locked(std::string_view row, std::string_view col) const {
  const KeyView key{row, col};
  for (auto run = runs_.rbegin(); run != runs_.rend(); ++run) {
    const auto& cells = (*run)->cells;
    auto it = std::lower_bound(cells.begin(), cells.end(), key, kv::CellKeyLess{});
    if (it != cells.end() && it->row == row && it->col == col) return it->state.has_value;
  }
  return false;
}

void Table::put_batch(std::span<const TableEntry> entries) {
  std::vector<CellState> states;
  states.reserve(entries.size());
  for (const auto& e : entries) {
    validate_key(e.row);
    validate_key(e.col);
    states.push_back(CellState{canonical_value(e.value), true, false});
  }
  std::unique_lock lock(mu_);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    insert_locked(entries[i].row, entries[i].col, std::move(states[i]));
    maybe_flush_locked();
  }
}

void Table::bulk_put(std::span<const TableEntry> entries,
                     const std::function<void(std::string_view, std::string_view)>& on_new) {
  std::vector<CellState> states;
  states.reserve(entries.size());
  for (const auto& e : entries) {
    validate_key(e.row);
    validate_key(e.col);
    states.push_back(CellState{canonical_value(e.value), true, false});
  }
  std::vector<std::uint32_t> order(entries.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return kv::CellKeyLess{}(entries[a], entries[b]);
  });

  auto run = std::make_shared<Run>();
  for (std::size_t i = 0; i < order.size();) {
    const TableEntry& first = entries[order[i]];
    CellState folded = std::move(states[order[i]]);
    std::size_t j = i + 1;
    for (; j < order.size(); ++j) {
      const TableEntry& e = entries[order[j]];
      if (e.row != first.row || e.col != first.col) break;
      folded = merge_cells(combiner_, folded, states[order[j]]);
    }
    run->cells.push_back(Cell{first.row, first.col, std::move(folded)});
    i = j;
  }

  std::unique_lock lock(mu_);
  flush_locked();
  if (on_new) {
    for (const auto& c : run->cells) {
      if (!visible_in_runs_locked(c.row, c.col)) on_new(c.row, c.col);
    }
  }
  if (run->cells.empty()) return;
  runs_.push_back(std::move(run));
  if (runs_.size() > max_runs_) compact_locked();
}

void Table::remove(std::string_view row, std::string_view col) {
  std::unique_lock lock(mu_);
  insert_locked(row, col, CellState{{}, false, true});
  maybe_flush_locked();
}

void Table::delete_entries(std::span<const std::pair<std::string, std::string>> cells) {
  std::unique_lock lock(mu_);
  for (const auto& [row, col] : cells) {
    insert_locked(row, col, CellState{{}, false, true});
    maybe_flush_locked();
  }
}

void Table::flush_locked() {
  if (buffer_.empty()) return;
  auto run = std::make_shared<Run>();
  run->cells.reserve(buffer_.size());
  for (auto node = buffer_.begin(); node != buffer_.end();) {
    auto nh = buffer_.extract(node++);
    run->cells.push_back(Cell{std::move(nh.key().row), std::move(nh.key().col),
                              std::move(nh.mapped())});
  }
  runs_.push_back(std::move(run));
  if (runs_.size() > max_runs_) compact_locked();
}

void Table::compact_locked() {
  if (runs_.empty()) return;
  Scanner s;
  s.sources_ = runs_;
  for (const auto& r : s.sources_) s.cursors_.push_back({r.get(), 0});
  s.unbounded_ = true;
  s.combiner_ = combiner_;

  auto merged = std::make_shared<Run>();
  TableEntry e;
  while (s.merge_next(e)) {
    merged->cells.push_back(
        Cell{std::move(e.row), std::move(e.col), CellState{std::move(e.value), true, false}});
  }
  runs_.clear();
  if (!merged->cells.empty()) runs_.push_back(std::move(merged));
}

void Table::flush() {
  std::unique_lock lock(mu_);
  flush_locked();
}

void Table::compact() {
  std::unique_lock lock(mu_);
  flush_locked();
  compact_locked();
}

void Table::set_auto_flush(std::size_t buffer_cells, std::size_t max_runs) {
  std::unique_lock lock(mu_);
  flush_threshold_ = std::max<std::size_t>(1, buffer_cells);
  max_runs_ = std::max<std::size_t>(1, max_runs);
}

std::size_t Table::run_count() const {
  std::shared_lock lock(mu_);
  return runs_.size();
}

std::size_t Table::buffered() const {
  std::shared_lock lock(mu_);
  return buffer_.size();
}

void Table::install_run(std::vector<TableEntry> sorted_entries) {
  auto run = std::make_shared<Run>();
  run->cells.reserve(sorted_entries.size());
  for (auto& e : sorted_entries) {
    run->cells.push_back(Cell{std::move(e.row), std::move(e.col),
                              CellState{canonical_value(e.value), true, false}});
  }
  std::unique_lock lock(mu_);
  if (!run->cells.empty()) runs_.push_back(std::move(run));
}

Scanner Table::scan(const KeySpec& rows, const KeySpec& cols, RowIterator iterator) const {
  scans_.fetch_add(1);
  Scanner s;
  s.cols_ = cols;
  s.combiner_ = combiner_;
  s.iterator_ = std::move(iterator);
  if (rows.is_all()) {
    s.unbounded_ = true;
  } else if (rows.is_range()) {
    s.ranges_.push_back(rows.key_range());
  } else {
    for (const auto& k : rows.keys()) s.ranges_.push_back(KeyRange{k, k});
  }

  auto frozen = std::make_shared<Run>();
  {
    std::shared_lock lock(mu_);
    s.sources_ = runs_;
    auto copy = [&](auto first, auto last) {
      for (auto it = first; it != last; ++it) {
        frozen->cells.push_back(Cell{it->first.row, it->first.col, it->second});
      }
    };
    if (s.unbounded_) {
      copy(buffer_.begin(), buffer_.end());
    } else {
      for (const auto& r : s.ranges_) {
        auto lo = buffer_.lower_bound(KeyView{r.first, {}});
        auto hi = lo;
        while (hi != buffer_.end() && hi->first.row <= r.last) ++hi;
        copy(lo, hi);
      }
    }
  }
  if (!frozen->cells.empty()) s.sources_.push_back(std::move(frozen));
  for (const auto& r : s.sources_) s.cursors_.push_back({r.get(), 0});
  if (!s.unbounded_ && !s.ranges_.empty()) s.seek_range();
  return s;
}

std::vector<TableEntry> Table::scan_all(const KeySpec& rows, const KeySpec& cols,
                                        RowIterator iterator) const {
  std::vector<TableEntry> out;
  Scanner s = scan(rows, cols, std::move(iterator));
  while (auto e = s.next()) out.push_back(std::move(*e));
  return out;
}

std::optional<std::string> Table::get(std::string_view row, std::string_view col) const {
  std::shared_lock lock(mu_);
  CellState state;
  const KeyView key{row, col};
  for (const auto& run : runs_) {
    const auto& cells = run->cells;
    auto it = std::lower_bound(cells.begin(), cells.end(), key, kv::CellKeyLess{});
    if (it != cells.end() && it->row == row && it->col == col) {
      state = merge_cells(combiner_, state, it->state);
    }
  }
  auto b = buffer_.find(key);
  if (b != buffer_.end()) state = merge_cells(combiner_, state, b->second);
  if (!state.has_value) return std::nullopt;
  return state.value;
}

// ---------------------------------------------------------------------------
// Store

Table& Store::create_table(const std::string& name, Combiner combiner) {
  if (!is_valid_table_name(name)) {
    fail(ErrorCode::kInvalidArgument, "bad table name '" + name + "'");
  }
  std::lock_guard lock(mu_);
  if (tables_.count(name)) fail(ErrorCode::kConflict, "table " + name + " already exists");
  auto [it, _] = tables_.emplace(name, std::make_unique<Table>(name, combiner));
  return *it->second;
}

Table* Store::find_table(std::string_view name) {
  std::lock_guard lock(mu_);
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : it->second.get();
}

const Table* Store::find_table(std::string_view name) const {
  std::lock_guard lock(mu_);
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : it->second.get();
}

Table& Store::table(std::string_view name) {
  Table* t = find_table(name);
  if (!t) fail(ErrorCode::kInvalidArgument, "no such table " + std::string(name));
  return *t;
}

const Table& Store::table(std::string_view name) const {
  const Table* t = find_table(name);
  if (!t) fail(ErrorCode::kInvalidArgument, "no such table " + std::string(name));
  return *t;
}

void Store::drop_table(std::string_view name) {
  std::lock_guard lock(mu_);
  auto it = tables_.find(name);
  if (it != tables_.end()) tables_.erase(it);
}

std::vector<std::string> Store::table_names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, _] : tables_) out.push_back(name);
  return out;
}

namespace {
constexpr const char* kManifest = "MANIFEST.tsv";
}

void Store::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  std::string manifest;
  for (const auto& name : table_names()) {
    const Table& t = table(name);
    manifest.append(name).push_back('\t');
    manifest.append(combiner_name(t.combiner())).push_back('\n');
    write_triple_file(dir / (name + ".tsv"), t.scan_all());
  }
  std::ofstream out(dir / kManifest, std::ios::binary | std::ios::trunc);
  out.write(manifest.data(), static_cast<std::streamsize>(manifest.size()));
  out.flush();
  if (!out) fail(ErrorCode::kIo, "cannot write manifest in " + dir.string());
}

void Store::load(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorCode::kIo, "snapshot directory " + dir.string() + " does not exist");
  }
  const auto manifest_path = dir / kManifest;
  if (!std::filesystem::exists(manifest_path, ec)) return;

  const std::string manifest = read_file(manifest_path);
  std::size_t pos = 0, line_no = 0;
  while (pos < manifest.size()) {
    ++line_no;
    std::size_t eol = manifest.find('\n', pos);
    if (eol == std::string::npos) eol = manifest.size();
    std::string_view line(manifest.data() + pos, eol - pos);
    pos = eol + 1;
    const auto tab = line.find('\t');
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::kParse, manifest_path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (tab == std::string_view::npos) bad("expected table<TAB>combiner");
    const std::string name(line.substr(0, tab));
    const auto combiner = combiner_from_name(line.substr(tab + 1));
    if (!is_valid_table_name(name)) bad("bad table name");
    if (!combiner) bad("unknown combiner");

    const auto file = dir / (name + ".tsv");
    auto entries = read_triple_file(file);
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (!kv::CellKeyLess{}(entries[i - 1], entries[i])) {
        fail(ErrorCode::kParse, file.string() + ":" + std::to_string(i + 1) +
                                    ": entries not strictly sorted");
      }
    }
    create_table(name, *combiner).install_run(std::move(entries));
  }
}

}  // namespace d4m
