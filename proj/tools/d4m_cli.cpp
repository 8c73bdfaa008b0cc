// Command-line front end. Talks to the engine only through the C API.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "d4m/d4m.h"

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 success, 1 I/O, 2 usage/parse, 3 memory cap, 4 validation.
int exit_code(d4m_status st) {
  switch (st) {
    case D4M_OK: return 0;
    case D4M_ERR_MEMORY_CAP: return 3;
    case D4M_ERR_VALIDATION: return 4;
    case D4M_ERR_IO:
    case D4M_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

struct Failure {
  int code;
};

void check(d4m_status st) {
  if (st == D4M_OK) return;
  std::cerr << "d4m: " << d4m_last_error() << "\n";
  throw Failure{exit_code(st)};
}

[[noreturn]] void usage(const std::string& msg) {
  std::cerr << "d4m: " << msg << "\n";
  throw Failure{2};
}

struct StoreDeleter {
  void operator()(d4m_store* s) const { d4m_store_free(s); }
};
struct AssocDeleter {
  void operator()(d4m_assoc* a) const { d4m_assoc_free(a); }
};
struct StringDeleter {
  void operator()(char* s) const { d4m_string_free(s); }
};
using StorePtr = std::unique_ptr<d4m_store, StoreDeleter>;
using AssocPtr = std::unique_ptr<d4m_assoc, AssocDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Globals {
  std::string store_dir;
  unsigned threads = 1;
  std::size_t memory_cap = 0;
};

StorePtr open_store(const Globals& g, bool create_missing) {
  if (g.store_dir.empty()) usage("--store DIR (or D4M_STORE) is required");
  d4m_store* raw = nullptr;
  check(d4m_store_new(&raw));
  StorePtr store(raw);
  std::error_code ec;
  if (fs::is_directory(g.store_dir, ec)) {
    check(d4m_store_load(store.get(), g.store_dir.c_str()));
  } else if (!create_missing) {
    std::cerr << "d4m: store directory " << g.store_dir << " does not exist\n";
    throw Failure{1};
  }
  return store;
}

void print(StringPtr text) { std::fputs(text.get(), stdout); }

void print_assoc(const d4m_assoc* a) {
  char* text = nullptr;
  check(d4m_assoc_to_tsv(a, &text));
  print(StringPtr(text));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "d4m: cannot write " << path << "\n";
    throw Failure{1};
  }
}

std::vector<int> parse_scales(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage("bad scale '" + item + "'");
    }
  }
  if (out.empty()) usage("--scales needs at least one value");
  return out;
}

struct AlgoArgs {
  std::string table;
  std::string mode = "memory";
  std::string seeds;
  std::size_t hops = 1;
  std::size_t k = 3;
  std::int64_t min_degree = -1;
  std::int64_t max_degree = -1;
};

AssocPtr load_adjacency(d4m_store* store, const std::string& table) {
  d4m_assoc* adj = nullptr;
  check(d4m_query(store, table.c_str(), ":", ":", &adj));
  return AssocPtr(adj);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"d4m: associative arrays over an embedded sorted key-value store"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--store", g.store_dir, "Snapshot directory of the store")
      ->envname("D4M_STORE");
  app.add_option("--threads", g.threads, "Worker threads for in-memory kernels")
      ->check(CLI::PositiveNumber);
  app.add_option("--memory-cap", g.memory_cap, "Logical memory cap in bytes (0 = none)");

  // ingest
  std::string ingest_table, ingest_input;
  bool exploded = false;
  std::string delim = "|";
  auto* ingest = app.add_subcommand("ingest", "Ingest a TripleFile into a table group");
  ingest->add_option("--table", ingest_table, "Base table name")->required();
  ingest->add_option("--input", ingest_input, "TripleFile to ingest")->required();
  ingest->add_flag("--exploded", exploded, "Encode records as (row, col|value, 1)");
  ingest->add_option("--delim", delim, "Exploded-schema delimiter");

  // scan
  std::string scan_table, scan_rows = ":", scan_cols = ":";
  bool scan_stats = false;
  auto* scan = app.add_subcommand("scan", "Print matching entries as TripleFile");
  scan->add_option("--table", scan_table, "Base table name")->required();
  scan->add_option("--rows", scan_rows, "Row selector");
  scan->add_option("--cols", scan_cols, "Column selector");
  scan->add_flag("--stats", scan_stats, "Report per-table scan counts on stderr");

  // graph algorithms
  AlgoArgs algo;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--table", algo.table, "Base table name")->required();
    sub->add_option("--mode", algo.mode, "memory or store")
        ->check(CLI::IsMember({"memory", "store"}));
  };
  auto* bfs = app.add_subcommand("bfs", "Breadth-first edge traversal");
  add_common(bfs);
  bfs->add_option("--seeds", algo.seeds, "Seed selector")->required();
  bfs->add_option("--hops", algo.hops, "Number of expansion steps");
  bfs->add_option("--min-degree", algo.min_degree, "Inclusive lower degree bound")
      ->check(CLI::NonNegativeNumber);
  bfs->add_option("--max-degree", algo.max_degree, "Inclusive upper degree bound")
      ->check(CLI::NonNegativeNumber);
  auto* jac = app.add_subcommand("jaccard", "Jaccard coefficients of node pairs");
  add_common(jac);
  auto* truss = app.add_subcommand("ktruss", "k-truss subgraph");
  add_common(truss);
  truss->add_option("--k", algo.k, "Truss order (>= 2)")->required()->check(CLI::Range(2, 1 << 30));

  // tablemult
  std::string tm_a, tm_b, tm_c, tm_semiring = "plus.times";
  auto* tm = app.add_subcommand("tablemult", "C += A' * B inside the store");
  tm->add_option("--a", tm_a, "Table A")->required();
  tm->add_option("--b", tm_b, "Table B")->required();
  tm->add_option("--c", tm_c, "Output table C (created if missing)")->required();
  tm->add_option("--semiring", tm_semiring, "plus.times, min.plus or max.times")
      ->check(CLI::IsMember({"plus.times", "min.plus", "max.times"}));

  // gen
  std::string gen_kind = "erdos", gen_out;
  std::uint64_t gen_n = 0, gen_seed = 1;
  double gen_degree = 8.0;
  auto* gen = app.add_subcommand("gen", "Generate a symmetric random graph as TripleFile");
  gen->add_option("--kind", gen_kind, "erdos or powerlaw")
      ->check(CLI::IsMember({"erdos", "powerlaw"}));
  gen->add_option("--n", gen_n, "Node count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--degree", gen_degree, "Average degree")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // bench
  std::string bench_scales = "8,9,10", bench_out, bench_gnuplot;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Client vs in-store multiply scaling");
  bench->add_option("--scales", bench_scales, "Comma-separated scales (2^scale nodes)");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--out", bench_out, "CSV output path")->required();
  bench->add_option("--gnuplot", bench_gnuplot, "Also write a gnuplot script here");

  for (auto* sub : {ingest, scan, bfs, jac, truss, tm, gen, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest->parsed()) {
      if (delim.size() != 1) usage("--delim must be a single character");
      StorePtr store = open_store(g, true);
      std::uint64_t count = 0;
      const auto t0 = std::chrono::steady_clock::now();
      check(d4m_ingest_tsv(store.get(), ingest_table.c_str(), ingest_input.c_str(),
                           exploded ? 1 : 0, delim[0], &count));
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      check(d4m_store_save(store.get(), g.store_dir.c_str()));
      const double rate = secs > 0 ? static_cast<double>(count) / secs : 0.0;
      std::printf("ingested %llu entries in %.3f s (%.0f/s)\n",
                  static_cast<unsigned long long>(count), secs, rate);
    } else if (scan->parsed()) {
      StorePtr store = open_store(g, false);
      char* text = nullptr;
      check(d4m_query_tsv(store.get(), scan_table.c_str(), scan_rows.c_str(),
                          scan_cols.c_str(), &text));
      print(StringPtr(text));
      if (scan_stats) {
        for (const std::string suffix : {"", "_T"}) {
          const std::string name = scan_table + suffix;
          std::uint64_t n = 0;
          check(d4m_store_scan_count(store.get(), name.c_str(), &n));
          std::fprintf(stderr, "scans %s=%llu\n", name.c_str(), static_cast<unsigned long long>(n));
        }
      }
    } else if (bfs->parsed() || jac->parsed() || truss->parsed()) {
      StorePtr store = open_store(g, false);
      d4m_assoc* result = nullptr;
      const bool in_store = algo.mode == "store";
      if (bfs->parsed()) {
        if (in_store) {
          check(d4m_bfs_table(store.get(), algo.table.c_str(), algo.seeds.c_str(), algo.hops,
                              algo.min_degree, algo.max_degree, &result));
        } else {
          AssocPtr adj = load_adjacency(store.get(), algo.table);
          check(d4m_bfs_assoc(adj.get(), algo.seeds.c_str(), algo.hops, algo.min_degree,
                              algo.max_degree, &result));
        }
      } else if (jac->parsed()) {
        if (in_store) {
          check(d4m_jaccard_table(store.get(), algo.table.c_str(), &result));
        } else {
          AssocPtr adj = load_adjacency(store.get(), algo.table);
          check(d4m_jaccard_assoc(adj.get(), &result));
        }
      } else {
        if (in_store) {
          check(d4m_ktruss_table(store.get(), algo.table.c_str(), algo.k, &result));
        } else {
          AssocPtr adj = load_adjacency(store.get(), algo.table);
          check(d4m_ktruss_assoc(adj.get(), algo.k, &result));
        }
      }
      AssocPtr owned(result);
      print_assoc(owned.get());
    } else if (tm->parsed()) {
      StorePtr store = open_store(g, false);
      const int sr = tm_semiring == "plus.times" ? D4M_PLUS_TIMES
                     : tm_semiring == "min.plus" ? D4M_MIN_PLUS
                                                 : D4M_MAX_TIMES;
      if (!d4m_store_has_table(store.get(), tm_c.c_str())) {
        const int combiner = sr == D4M_PLUS_TIMES ? D4M_COMBINER_SUM
                             : sr == D4M_MIN_PLUS ? D4M_COMBINER_MIN
                                                  : D4M_COMBINER_MAX;
        check(d4m_store_create_table(store.get(), tm_c.c_str(), combiner));
      }
      d4m_tablemult_stats stats{};
      const auto t0 = std::chrono::steady_clock::now();
      check(d4m_tablemult(store.get(), tm_a.c_str(), tm_b.c_str(), tm_c.c_str(), sr,
                          g.memory_cap, &stats));
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      check(d4m_store_save(store.get(), g.store_dir.c_str()));
      std::printf("tablemult %llu partial products over %llu rows in %.3f s, peak %zu bytes\n",
                  static_cast<unsigned long long>(stats.partial_products),
                  static_cast<unsigned long long>(stats.inner_rows), secs, stats.peak_bytes);
    } else if (gen->parsed()) {
      char* text = nullptr;
      check(d4m_gen_graph(gen_kind.c_str(), gen_n, gen_degree, gen_seed, &text));
      StringPtr owned(text);
      if (gen_out.empty()) {
        std::fputs(owned.get(), stdout);
      } else {
        write_text(gen_out, owned.get());
      }
    } else if (bench->parsed()) {
      const auto scales = parse_scales(bench_scales);
      char* csv = nullptr;
      check(d4m_bench_tablemult(scales.data(), scales.size(), bench_seed, g.memory_cap,
                                g.threads, &csv));
      StringPtr owned(csv);
      write_text(bench_out, owned.get());
      if (!bench_gnuplot.empty()) {
        char* script = nullptr;
        check(d4m_gnuplot_script(bench_out.c_str(), &script));
        write_text(bench_gnuplot, StringPtr(script).get());
      }
      std::fputs(owned.get(), stdout);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
