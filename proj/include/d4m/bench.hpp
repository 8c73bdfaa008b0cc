#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "d4m/gen.hpp"
#include "d4m/kernels.hpp"
#include "d4m/kvstore.hpp"

namespace d4m {

enum class BenchMode { kClient, kServer };

struct BenchRecord {
  int scale = 0;
  std::uint64_t nnz_a = 0;
  std::uint64_t nnz_b = 0;
  std::uint64_t nnz_c = 0;
  BenchMode mode = BenchMode::kClient;
  double seconds = 0.0;
  double pps = 0.0;  // partial products per second
  std::size_t peak_bytes = 0;
  bool ok = true;  // false: the logical memory cap was exceeded
  std::uint64_t partial_products = 0;
};

struct BenchConfig {
  std::vector<int> scales;  // 2^scale nodes per operand
  std::uint64_t seed = 1;
  std::size_t memory_cap = 0;  // 0 = unlimited
  unsigned threads = 1;
  double avg_degree = 8.0;
  GraphKind kind = GraphKind::kErdos;
};

// Client mode: read both operand tables into arrays, multiply in memory and
// write the product. Server mode: tablemult. Both compute C = A' * B under
// plus.times and charge the same logical budget.
BenchRecord run_client_multiply(Store& store, const std::string& a, const std::string& b,
                                const std::string& c, std::size_t memory_cap, unsigned threads);
BenchRecord run_server_multiply(Store& store, const std::string& a, const std::string& b,
                                const std::string& c, std::size_t memory_cap);

// Generates the operands for each scale and runs both modes; two records
// per scale, client first.
std::vector<BenchRecord> bench_tablemult(const BenchConfig& config);

inline constexpr const char* kBenchCsvHeader =
    "scale,nnzA,nnzB,nnzC,mode,seconds,pps,peak_bytes,status";
std::string bench_csv(std::span<const BenchRecord> records);
std::string gnuplot_script(const std::string& csv_path);

// Largest entry_bytes() sum of a single row of the table.
std::size_t max_row_bytes(const Table& t);

}  // namespace d4m
