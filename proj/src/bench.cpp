#include "d4m/bench.hpp"

#include <chrono>
#include <cstdio>

#include "d4m/error.hpp"
#include "d4m/schema.hpp"

namespace d4m {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t count_entries(const Table& t) {
  std::uint64_t n = 0;
  Scanner s = t.scan();
  while (s.next()) ++n;
  return n;
}

// Reads a whole table into an array, charging every entry it holds.
AssocArray load_charged(const Table& t, MemoryBudget& budget) {
  std::vector<TableEntry> entries;
  Scanner s = t.scan();
  while (auto e = s.next()) {
    budget.charge(entry_bytes(e->row, e->col, e->value.size()));
    entries.push_back(std::move(*e));
  }
  return assoc_from_stored(entries);
}

std::size_t array_bytes(const AssocArray& a) {
  std::size_t bytes = 0;
  for (std::size_t r = 0; r < a.row_keys().size(); ++r) {
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) {
      bytes += entry_bytes(a.row_keys()[r], a.col_keys()[a.col_index(e)], kNumValueBytes);
    }
  }
  return bytes;
}

void finish(BenchRecord& r, Clock::time_point t0) {
  r.seconds = seconds_since(t0);
  r.pps = r.seconds > 0.0 ? static_cast<double>(r.partial_products) / r.seconds : 0.0;
}

}  // namespace

BenchRecord run_client_multiply(Store& store, const std::string& a, const std::string& b,
                                const std::string& c, std::size_t memory_cap, unsigned threads) {
  BenchRecord rec;
  rec.mode = BenchMode::kClient;
  MemoryBudget budget(memory_cap);
  Table& out = store.table(c);
  const auto t0 = Clock::now();
  try {
    const AssocArray ma = load_charged(store.table(a), budget);
    const AssocArray mb = load_charged(store.table(b), budget);
    const AssocArray at = transpose(ma);
    budget.charge(array_bytes(at));
    MatmulStats ms;
    const AssocArray prod = matmul(at, mb, Semiring::plus_times(), {threads, &budget}, &ms);
    rec.partial_products = ms.partial_products;

    std::vector<TableEntry> batch;
    for (std::size_t r = 0; r < prod.row_keys().size(); ++r) {
      for (std::size_t e = prod.row_begin(r); e < prod.row_end(r); ++e) {
        batch.push_back(TableEntry{prod.row_keys()[r], prod.col_keys()[prod.col_index(e)],
                                   format_number(prod.num(e))});
      }
    }
    out.put_batch(batch);
    out.flush();
    rec.nnz_c = prod.nnz();
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kMemoryCap) throw;
    rec.ok = false;
    rec.nnz_c = 0;
  }
  finish(rec, t0);
  rec.peak_bytes = budget.peak();
  return rec;
}

BenchRecord run_server_multiply(Store& store, const std::string& a, const std::string& b,
                                const std::string& c, std::size_t memory_cap) {
  BenchRecord rec;
  rec.mode = BenchMode::kServer;
  MemoryBudget budget(memory_cap);
  const auto t0 = Clock::now();
  try {
    auto stats = tablemult(store, a, b, c, Semiring::plus_times(), budget);
    rec.partial_products = stats.partial_products;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kMemoryCap) throw;
    rec.ok = false;
  }
  finish(rec, t0);
  rec.peak_bytes = budget.peak();
  if (rec.ok) rec.nnz_c = count_entries(store.table(c));
  return rec;
}

std::vector<BenchRecord> bench_tablemult(const BenchConfig& config) {
  std::vector<BenchRecord> out;
  for (int scale : config.scales) {
    if (scale < 0 || scale > 30) fail(ErrorCode::kInvalidArgument, "scale out of range");
    const std::uint64_t n = std::uint64_t{1} << scale;
    const std::uint64_t base_seed = config.seed * 1000003u + static_cast<std::uint64_t>(scale);

    Store store;
    Table& ta = store.create_table("A", Combiner::kNone);
    Table& tb = store.create_table("B", Combiner::kNone);
    ta.install_run(generate_graph(config.kind, n, config.avg_degree, base_seed * 2));
    tb.install_run(generate_graph(config.kind, n, config.avg_degree, base_seed * 2 + 1));
    store.create_table("C_client", Combiner::kSum);
    store.create_table("C_server", Combiner::kSum);
    const std::uint64_t nnz_a = count_entries(ta);
    const std::uint64_t nnz_b = count_entries(tb);

    for (BenchMode mode : {BenchMode::kClient, BenchMode::kServer}) {
      BenchRecord rec =
          mode == BenchMode::kClient
              ? run_client_multiply(store, "A", "B", "C_client", config.memory_cap, config.threads)
              : run_server_multiply(store, "A", "B", "C_server", config.memory_cap);
      rec.scale = scale;
      rec.nnz_a = nnz_a;
      rec.nnz_b = nnz_b;
      out.push_back(rec);
    }
  }
  return out;
}

std::string bench_csv(std::span<const BenchRecord> records) {
  std::string out = kBenchCsvHeader;
  out.push_back('\n');
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%llu,%llu,%llu,%s,%.6f,%.1f,%zu,%s\n", r.scale,
                  static_cast<unsigned long long>(r.nnz_a),
                  static_cast<unsigned long long>(r.nnz_b),
                  static_cast<unsigned long long>(r.nnz_c),
                  r.mode == BenchMode::kClient ? "client" : "server", r.seconds, r.pps,
                  r.peak_bytes, r.ok ? "ok" : "oom");
    out += buf;
  }
  return out;
}

std::string gnuplot_script(const std::string& csv_path) {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set logscale y\n"
         "set xlabel 'scale'\n"
         "set ylabel 'partial products / s'\n"
         "set title 'client vs in-store multiply'\n"
         "plot '" + csv_path + "' using 1:(strcol(5) eq \"client\" && strcol(9) eq \"ok\" ? $7 : 1/0) "
         "with linespoints title 'client', \\\n"
         "     '" + csv_path + "' using 1:(strcol(5) eq \"server\" && strcol(9) eq \"ok\" ? $7 : 1/0) "
         "with linespoints title 'server'\n";
}

std::size_t max_row_bytes(const Table& t) {
  std::size_t best = 0;
  std::vector<TableEntry> row;
  Scanner s = t.scan();
  while (s.next_row(row)) {
    std::size_t bytes = 0;
    for (const auto& e : row) bytes += entry_bytes(e.row, e.col, e.value.size());
    best = std::max(best, bytes);
  }
  return best;
}

}  // namespace d4m
