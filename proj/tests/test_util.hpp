#pragma once

// Test-only generators and brute-force oracles. Nothing here calls the
// engine's algorithms; oracles work on plain maps and sets.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "d4m/assoc.hpp"

namespace testutil {

using Dense = std::map<std::string, std::map<std::string, double>>;
using Edge = std::pair<std::string, std::string>;
using Adjacency = std::map<std::string, std::set<std::string>>;

inline std::string key(const char* prefix, std::uint64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03llu", prefix, static_cast<unsigned long long>(i));
  return buf;
}

// Random Num array over an nrows x ncols key grid with small integer values.
inline d4m::AssocArray random_num(std::mt19937_64& rng, std::size_t nrows, std::size_t ncols,
                                  double density, int max_value = 9,
                                  const char* row_prefix = "r", const char* col_prefix = "c") {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> val(1, max_value);
  std::vector<std::string> rows, cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      if (coin(rng) < density) {
        rows.push_back(key(row_prefix, i));
        cols.push_back(key(col_prefix, j));
        vals.push_back(val(rng));
      }
    }
  }
  return d4m::assoc_from_num(rows, cols, vals);
}

inline Dense to_dense(const d4m::AssocArray& a) {
  Dense d;
  for (const auto& t : a.to_triples()) d[t.row][t.col] = std::get<double>(t.value);
  return d;
}

inline double lookup(const Dense& d, const std::string& r, const std::string& c) {
  auto it = d.find(r);
  if (it == d.end()) return 0.0;
  auto jt = it->second.find(c);
  return jt == it->second.end() ? 0.0 : jt->second;
}

inline std::vector<d4m::Triple> dense_triples(const Dense& d) {
  std::vector<d4m::Triple> out;
  for (const auto& [r, row] : d) {
    for (const auto& [c, v] : row) {
      if (v != 0.0) out.push_back(d4m::Triple{r, c, v});
    }
  }
  return out;
}

// Triple loop over every (i, k, j) key combination, on flat dense storage.
inline std::vector<d4m::Triple> dense_matmul(const d4m::AssocArray& a, const d4m::AssocArray& b) {
  std::set<std::string> inner_set(a.col_keys().begin(), a.col_keys().end());
  inner_set.insert(b.row_keys().begin(), b.row_keys().end());
  const std::vector<std::string> inner(inner_set.begin(), inner_set.end());
  const auto& rows = a.row_keys();
  const auto& cols = b.col_keys();
  auto pos = [&](const std::string& k) {
    return static_cast<std::size_t>(std::lower_bound(inner.begin(), inner.end(), k) -
                                    inner.begin());
  };
  const std::size_t m = rows.size(), n = inner.size(), p = cols.size();
  std::vector<double> da(m * n, 0.0), db(n * p, 0.0), dc(m * p, 0.0);
  for (const auto& t : a.to_triples()) {
    const auto i = std::lower_bound(rows.begin(), rows.end(), t.row) - rows.begin();
    da[i * n + pos(t.col)] = std::get<double>(t.value);
  }
  for (const auto& t : b.to_triples()) {
    const auto j = std::lower_bound(cols.begin(), cols.end(), t.col) - cols.begin();
    db[pos(t.row) * p + j] = std::get<double>(t.value);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < p; ++j) dc[i * p + j] += da[i * n + k] * db[k * p + j];
  std::vector<d4m::Triple> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (dc[i * p + j] != 0.0) out.push_back(d4m::Triple{rows[i], cols[j], dc[i * p + j]});
  return out;
}

// Random simple undirected graph on n nodes "n000".., as an edge set.
inline std::set<Edge> random_graph(std::mt19937_64& rng, std::size_t n, double p) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::set<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng) < p) edges.insert({key("n", i), key("n", j)});
    }
  }
  return edges;
}

inline d4m::AssocArray adjacency_array(const std::set<Edge>& undirected) {
  std::vector<std::string> rows, cols;
  std::vector<double> vals;
  for (const auto& [u, v] : undirected) {
    rows.push_back(u);
    cols.push_back(v);
    vals.push_back(1.0);
    rows.push_back(v);
    cols.push_back(u);
    vals.push_back(1.0);
  }
  return d4m::assoc_from_num(rows, cols, vals);
}

inline Adjacency neighbors(const std::set<Edge>& undirected) {
  Adjacency adj;
  for (const auto& [u, v] : undirected) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  return adj;
}

// Nodes within `hops` steps of the seeds (seeds included when present).
inline std::set<std::string> queue_bfs(const Adjacency& adj, const std::set<std::string>& seeds,
                                       std::size_t hops) {
  std::map<std::string, std::size_t> dist;
  std::deque<std::string> q;
  for (const auto& s : seeds) {
    if (adj.count(s)) {
      dist[s] = 0;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    if (dist[u] == hops) continue;
    for (const auto& v : adj.at(u)) {
      if (!dist.count(v)) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  std::set<std::string> out;
  for (const auto& [k, _] : dist) out.insert(k);
  return out;
}

inline std::set<std::string> node_set(const d4m::AssocArray& a) {
  std::set<std::string> out(a.row_keys().begin(), a.row_keys().end());
  out.insert(a.col_keys().begin(), a.col_keys().end());
  return out;
}

// |N(i) & N(j)| / |N(i) | N(j)| for i < j with a common neighbor.
inline std::map<Edge, double> jaccard_oracle(const Adjacency& adj) {
  std::map<Edge, double> out;
  for (auto it = adj.begin(); it != adj.end(); ++it) {
    for (auto jt = std::next(it); jt != adj.end(); ++jt) {
      std::size_t inter = 0;
      for (const auto& x : it->second) inter += jt->second.count(x);
      if (inter == 0) continue;
      const std::size_t uni = it->second.size() + jt->second.size() - inter;
      out[{it->first, jt->first}] = static_cast<double>(inter) / static_cast<double>(uni);
    }
  }
  return out;
}

// Classic peeling: remove under-supported edges one at a time, recounting
// triangles on the current graph, until every edge is supported.
inline std::set<Edge> peel_oracle(std::set<Edge> edges, std::size_t k) {
  if (k <= 2) return edges;
  Adjacency adj = neighbors(edges);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = edges.begin(); it != edges.end();) {
      std::size_t tri = 0;
      for (const auto& x : adj[it->first]) tri += adj[it->second].count(x);
      if (tri < k - 2) {
        adj[it->first].erase(it->second);
        adj[it->second].erase(it->first);
        it = edges.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return edges;
}

inline std::set<Edge> upper_edges(const d4m::AssocArray& a) {
  std::set<Edge> out;
  for (const auto& t : a.to_triples()) {
    if (t.row < t.col) out.insert({t.row, t.col});
  }
  return out;
}

}  // namespace testutil

#include "d4m/kvstore.hpp"
#include "d4m/value.hpp"

namespace testutil {

// Zero-flush model of a table: one ordered map, updated in program order.
class ReplayOracle {
 public:
  explicit ReplayOracle(d4m::Combiner c) : combiner_(c) {}

  void put(const std::string& r, const std::string& c, const std::string& v) {
    std::string value = v;
    if (d4m::is_numeric(combiner_)) value = d4m::format_number(*d4m::parse_number(v));
    auto it = cells_.find({r, c});
    if (it == cells_.end()) {
      cells_[{r, c}] = value;
      return;
    }
    const double x = *d4m::parse_number(it->second), y = *d4m::parse_number(value);
    switch (combiner_) {
      case d4m::Combiner::kSum: it->second = d4m::format_number(x + y); break;
      case d4m::Combiner::kMin: it->second = d4m::format_number(std::min(x, y)); break;
      case d4m::Combiner::kMax: it->second = d4m::format_number(std::max(x, y)); break;
      default: it->second = value;
    }
  }
  void remove(const std::string& r, const std::string& c) { cells_.erase({r, c}); }

  std::vector<d4m::TableEntry> scan() const {
    std::vector<d4m::TableEntry> out;
    for (const auto& [k, v] : cells_) out.push_back({k.first, k.second, v});
    return out;
  }

 private:
  d4m::Combiner combiner_;
  std::map<std::pair<std::string, std::string>, std::string> cells_;
};

// Applies one random operation to both the table and the oracle.
// Numeric values for numeric combiners, short words otherwise.
inline void random_op(std::mt19937_64& rng, d4m::Table& t, ReplayOracle& o, int key_space) {
  std::uniform_int_distribution<int> op(0, 99), k(0, key_space - 1), v(-5, 9);
  auto row = key("r", k(rng)), col = key("c", k(rng) % 6);
  const int roll = op(rng);
  if (roll < 60) {
    std::string value = d4m::is_numeric(t.combiner()) ? std::to_string(v(rng))
                                                       : "w" + std::to_string(v(rng) + 5);
    t.put(row, col, value);
    o.put(row, col, value);
  } else if (roll < 80) {
    t.remove(row, col);
    o.remove(row, col);
  } else if (roll < 92) {
    t.flush();
  } else {
    t.compact();
  }
}

}  // namespace testutil
