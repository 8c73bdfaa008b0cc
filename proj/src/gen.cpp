#include "d4m/gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "d4m/error.hpp"

namespace d4m {
namespace {

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

using Edge = std::pair<std::uint64_t, std::uint64_t>;

// Batagelj-Brandes skipping over the lower triangle.
std::vector<Edge> erdos_edges(std::uint64_t n, double p, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  if (p <= 0.0 || n < 2) return edges;
  if (p >= 1.0) {
    for (std::uint64_t v = 1; v < n; ++v) {
      for (std::uint64_t w = 0; w < v; ++w) edges.emplace_back(v, w);
    }
    return edges;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    const double r = uniform01(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= static_cast<std::int64_t>(v) && v < n) {
      w -= static_cast<std::int64_t>(v);
      ++v;
    }
    if (v < n) edges.emplace_back(v, static_cast<std::uint64_t>(w));
  }
  return edges;
}

std::vector<Edge> powerlaw_edges(std::uint64_t n, double avg_degree, std::mt19937_64& rng) {
  const std::uint64_t m = std::max<std::uint64_t>(1, std::llround(avg_degree / 2.0));
  std::vector<Edge> edges;
  std::vector<std::uint64_t> endpoints;  // node repeated once per incident edge
  const std::uint64_t core = std::min(n, m + 1);
  for (std::uint64_t v = 1; v < core; ++v) {
    for (std::uint64_t w = 0; w < v; ++w) {
      edges.emplace_back(v, w);
      endpoints.push_back(v);
      endpoints.push_back(w);
    }
  }
  std::vector<std::uint64_t> picked;
  for (std::uint64_t v = core; v < n; ++v) {
    picked.clear();
    while (picked.size() < m) {
      const auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(endpoints.size()));
      const std::uint64_t w = endpoints[std::min(idx, endpoints.size() - 1)];
      if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
    }
    for (auto w : picked) {
      edges.emplace_back(v, w);
      endpoints.push_back(v);
      endpoints.push_back(w);
    }
  }
  return edges;
}

}  // namespace

std::optional<GraphKind> graph_kind_from_name(std::string_view name) {
  if (name == "erdos") return GraphKind::kErdos;
  if (name == "powerlaw") return GraphKind::kPowerLaw;
  return std::nullopt;
}

std::string node_key(std::uint64_t index, std::uint64_t node_count) {
  std::size_t width = 5;
  for (std::uint64_t x = node_count > 0 ? node_count - 1 : 0; x >= 100000; x /= 10) ++width;
  std::string digits = std::to_string(index);
  return "v" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::vector<TableEntry> generate_graph(GraphKind kind, std::uint64_t n, double avg_degree,
                                       std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "node count must be at least 1");
  if (!(avg_degree >= 0.0) || !std::isfinite(avg_degree)) {
    fail(ErrorCode::kInvalidArgument, "average degree must be a non-negative number");
  }
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges = kind == GraphKind::kErdos
                                ? erdos_edges(n, avg_degree / static_cast<double>(n), rng)
                                : powerlaw_edges(n, avg_degree, rng);

  std::vector<Edge> both;
  both.reserve(edges.size() * 2);
  for (auto [v, w] : edges) {
    both.emplace_back(v, w);
    both.emplace_back(w, v);
  }
  std::sort(both.begin(), both.end());
  both.erase(std::unique(both.begin(), both.end()), both.end());

  // Zero-padded keys sort like their indices.
  std::vector<TableEntry> out;
  out.reserve(both.size());
  for (auto [v, w] : both) out.push_back(TableEntry{node_key(v, n), node_key(w, n), "1"});
  return out;
}

}  // namespace d4m
