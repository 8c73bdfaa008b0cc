#include "d4m/graph.hpp"

#include <algorithm>
#include <unordered_map>

#include "d4m/error.hpp"
#include "d4m/kernels.hpp"

namespace d4m {
namespace {

// Keeps only rows of `step` whose degree the filter admits.
template <typename DegreeOf>
AssocArray filter_rows(const AssocArray& step, const DegreeFilter& filter, DegreeOf&& degree_of) {
  if (!filter.active()) return step;
  std::vector<std::string> keep;
  for (const auto& r : step.row_keys()) {
    if (filter.admits(degree_of(r))) keep.push_back(r);
  }
  if (keep.empty()) return AssocArray();
  return subref(step, KeySpec::list(std::move(keep)), KeySpec::all());
}

std::string scratch_name(const TableRef& ref, std::string_view what) {
  return ref.base + "_" + std::string(what) + "Tmp";
}

Table& fresh_scratch(Store& store, const std::string& name) {
  store.drop_table(name);
  return store.create_table(name, Combiner::kSum);
}

// A*A for a symmetric stored adjacency, as (row, col) -> common-neighbor
// count entries, computed in the store.
std::vector<TableEntry> stored_square(const TableRef& ref, std::string_view what) {
  Store& store = *ref.store;
  const std::string tmp = scratch_name(ref, what);
  fresh_scratch(store, tmp);
  MemoryBudget unlimited;
  tablemult(store, ref.edge->name(), ref.edge->name(), tmp, Semiring::plus_times(), unlimited,
            TableMultOptions{.logical = true});
  auto out = store.table(tmp).scan_all();
  store.drop_table(tmp);
  return out;
}

}  // namespace

AssocArray checked_adjacency(const AssocArray& adj) {
  AssocArray a = adj;
  if (!a.is_num()) {
    a = logical(a);
  } else {
    for (std::size_t e = 0; e < a.nnz(); ++e) {
      if (a.num(e) != 1.0) fail(ErrorCode::kValidation, "adjacency values must be 0/1");
    }
  }
  for (std::size_t r = 0; r < a.row_keys().size(); ++r) {
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) {
      if (a.col_keys()[a.col_index(e)] == a.row_keys()[r]) {
        fail(ErrorCode::kValidation, "adjacency has a self loop at '" + a.row_keys()[r] + "'");
      }
    }
  }
  if (!(transpose(a) == a)) fail(ErrorCode::kValidation, "adjacency is not symmetric");
  return a;
}

void validate_stored_adjacency(const TableRef& ref) {
  // The transpose table mirrors the edge table, so the adjacency is symmetric
  // exactly when both scans are identical.
  Scanner se = ref.edge->scan();
  Scanner st = ref.edge_t->scan();
  bool all_numeric = true;
  bool all_one = true;
  while (true) {
    auto e = se.next();
    auto t = st.next();
    if (!e && !t) break;
    if (!e || !t || !(*e == *t)) fail(ErrorCode::kValidation, "adjacency is not symmetric");
    if (e->row == e->col) {
      fail(ErrorCode::kValidation, "adjacency has a self loop at '" + e->row + "'");
    }
    auto v = parse_number(e->value);
    if (!v) {
      all_numeric = false;
    } else if (*v != 1.0) {
      all_one = false;
    }
  }
  if (all_numeric && !all_one) fail(ErrorCode::kValidation, "adjacency values must be 0/1");
}

// ---------------------------------------------------------------------------
// BFS

AssocArray bfs(const AssocArray& adj, const KeySpec& seeds, std::size_t hops,
               const DegreeFilter& filter) {
  if (hops == 0) return AssocArray();
  const AssocArray a = logical(adj);
  const AssocArray deg = reduce_cols(a);
  auto degree_of = [&](const std::string& key) -> std::uint64_t {
    auto v = deg.at(key, kReduceKey);
    return v ? static_cast<std::uint64_t>(std::get<double>(*v)) : 0;
  };

  AssocArray result;
  KeySpec frontier = seeds;
  for (std::size_t step = 0; step < hops; ++step) {
    AssocArray edges = filter_rows(subref(a, frontier, KeySpec::all()), filter, degree_of);
    if (edges.empty()) break;
    result = ew_add(result, edges, BinaryOp::kMax);
    frontier = KeySpec::list(edges.col_keys());
  }
  return result;
}

AssocArray bfs(const TableRef& ref, const KeySpec& seeds, std::size_t hops,
               const DegreeFilter& filter) {
  if (hops == 0) return AssocArray();
  AssocArray result;
  KeySpec frontier = seeds;
  for (std::size_t step = 0; step < hops; ++step) {
    AssocArray edges = logical(query(ref, frontier, KeySpec::all()));
    if (filter.active() && !edges.empty()) {
      const AssocArray deg = degree(ref, KeySpec::list(edges.row_keys()));
      edges = filter_rows(edges, filter, [&](const std::string& key) -> std::uint64_t {
        auto v = deg.at(key, kDegreeColumn);
        return v ? static_cast<std::uint64_t>(std::get<double>(*v)) : 0;
      });
    }
    if (edges.empty()) break;
    result = ew_add(result, edges, BinaryOp::kMax);
    frontier = KeySpec::list(edges.col_keys());
  }
  return result;
}

// ---------------------------------------------------------------------------
// Jaccard

AssocArray jaccard(const AssocArray& adj) {
  const AssocArray a = checked_adjacency(adj);
  const AssocArray common = matmul(a, a);

  std::vector<double> deg(a.row_keys().size());
  for (std::size_t r = 0; r < deg.size(); ++r) {
    deg[r] = static_cast<double>(a.row_end(r) - a.row_begin(r));
  }
  // Row and column keys of `common` are node keys of `a`.
  std::vector<std::size_t> col_node(common.col_keys().size());
  for (std::size_t c = 0; c < col_node.size(); ++c) {
    col_node[c] = *a.find_row(common.col_keys()[c]);
  }

  AssocBuilder out(ValueKind::kNum, common.col_keys());
  for (std::size_t r = 0; r < common.row_keys().size(); ++r) {
    const auto& rk = common.row_keys()[r];
    const double di = deg[*a.find_row(rk)];
    for (std::size_t e = common.row_begin(r); e < common.row_end(r); ++e) {
      const auto c = common.col_index(e);
      if (!(rk < common.col_keys()[c])) continue;
      const double shared = common.num(e);
      out.add_num_at(rk, c, shared / (di + deg[col_node[c]] - shared));
    }
  }
  return std::move(out).build();
}

AssocArray jaccard(const TableRef& ref) {
  validate_stored_adjacency(ref);
  const auto common = stored_square(ref, "Jaccard");
  const AssocArray deg = degree(ref, KeySpec::all());
  auto degree_of = [&](const std::string& key) {
    auto v = deg.at(key, kDegreeColumn);
    return v ? std::get<double>(*v) : 0.0;
  };

  AssocBuilder out(ValueKind::kNum);
  for (const auto& e : common) {
    if (!(e.row < e.col)) continue;
    const double shared = *parse_number(e.value);
    out.add_num(e.row, e.col, shared / (degree_of(e.row) + degree_of(e.col) - shared));
  }
  return std::move(out).build();
}

// ---------------------------------------------------------------------------
// k-truss

AssocArray ktruss(const AssocArray& adj, std::size_t k) {
  AssocArray a = checked_adjacency(adj);
  if (k <= 2) return a;
  const double need = static_cast<double>(k - 2);

  while (!a.empty()) {
    const AssocArray support = ew_mult(a, matmul(a, a));
    AssocBuilder kept(ValueKind::kNum, support.col_keys());
    for (std::size_t r = 0; r < support.row_keys().size(); ++r) {
      for (std::size_t e = support.row_begin(r); e < support.row_end(r); ++e) {
        if (support.num(e) >= need) kept.add_num_at(support.row_keys()[r], support.col_index(e), 1.0);
      }
    }
    AssocArray next = std::move(kept).build();
    if (next.nnz() == a.nnz()) break;
    a = std::move(next);
  }
  return a;
}

AssocArray ktruss(const TableRef& ref, std::size_t k) {
  validate_stored_adjacency(ref);
  if (k > 2) {
    const double need = static_cast<double>(k - 2);
    while (true) {
      const auto common = stored_square(ref, "Truss");
      // Walk the edge table against the sorted A*A entries; edges absent from
      // A*A have support zero.
      std::vector<std::pair<std::string, std::string>> doomed;
      std::size_t ci = 0;
      Scanner edges = ref.edge->scan();
      while (auto e = edges.next()) {
        while (ci < common.size() && kv::CellKeyLess{}(common[ci], *e)) ++ci;
        double support = 0.0;
        if (ci < common.size() && common[ci].row == e->row && common[ci].col == e->col) {
          support = *parse_number(common[ci].value);
        }
        if (support < need) doomed.emplace_back(e->row, e->col);
      }
      if (doomed.empty()) break;

      std::vector<std::pair<std::string, std::string>> mirrored;
      mirrored.reserve(doomed.size());
      for (const auto& [r, c] : doomed) mirrored.emplace_back(c, r);
      ref.edge->delete_entries(doomed);
      ref.edge_t->delete_entries(mirrored);

      // `doomed` is in row order; one degree adjustment per row.
      for (std::size_t i = 0; i < doomed.size();) {
        std::size_t j = i;
        while (j < doomed.size() && doomed[j].first == doomed[i].first) ++j;
        const std::string& row = doomed[i].first;
        ref.degree->put(row, kDegreeColumn, "-" + std::to_string(j - i));
        auto left = ref.degree->get(row, kDegreeColumn);
        if (left && parse_number(*left).value_or(1.0) == 0.0) {
          ref.degree->remove(row, kDegreeColumn);
        }
        i = j;
      }
    }
  }
  return logical(query(ref, KeySpec::all(), KeySpec::all()));
}

// ---------------------------------------------------------------------------
// GraphView dispatch

AssocArray bfs(const GraphView& g, const KeySpec& seeds, std::size_t hops,
               const DegreeFilter& filter) {
  if (auto* a = std::get_if<0>(&g)) return bfs(a->get(), seeds, hops, filter);
  return bfs(std::get<TableRef>(g), seeds, hops, filter);
}

AssocArray jaccard(const GraphView& g) {
  if (auto* a = std::get_if<0>(&g)) return jaccard(a->get());
  return jaccard(std::get<TableRef>(g));
}

AssocArray ktruss(const GraphView& g, std::size_t k) {
  if (auto* a = std::get_if<0>(&g)) return ktruss(a->get(), k);
  return ktruss(std::get<TableRef>(g), k);
}

}  // namespace d4m
