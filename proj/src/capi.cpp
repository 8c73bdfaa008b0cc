#include "d4m/d4m.h"

#include <cstring>
#include <new>
#include <string>

#include "d4m/assoc.hpp"
#include "d4m/bench.hpp"
#include "d4m/error.hpp"
#include "d4m/gen.hpp"
#include "d4m/graph.hpp"
#include "d4m/kernels.hpp"
#include "d4m/kvstore.hpp"
#include "d4m/schema.hpp"
#include "d4m/triple_file.hpp"

struct d4m_assoc {
  d4m::AssocArray a;
};

struct d4m_store {
  d4m::Store s;
};

namespace {

thread_local std::string g_last_error;

using d4m::ErrorCode;

template <typename Fn>
d4m_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return D4M_OK;
  } catch (const d4m::Error& e) {
    g_last_error = e.what();
    return static_cast<d4m_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return D4M_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) d4m::fail(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

d4m_assoc* wrap(d4m::AssocArray a) { return new d4m_assoc{std::move(a)}; }

std::optional<d4m::Collision> to_collision(int c) {
  switch (c) {
    case D4M_COLLISION_DEFAULT: return std::nullopt;
    case D4M_COLLISION_SUM: return d4m::Collision::kSum;
    case D4M_COLLISION_MIN: return d4m::Collision::kMin;
    case D4M_COLLISION_MAX: return d4m::Collision::kMax;
    case D4M_COLLISION_LAST: return d4m::Collision::kLast;
  }
  d4m::fail(ErrorCode::kInvalidArgument, "unknown collision policy " + std::to_string(c));
}

d4m::BinaryOp to_binop(int op) {
  switch (op) {
    case D4M_OP_PLUS: return d4m::BinaryOp::kPlus;
    case D4M_OP_TIMES: return d4m::BinaryOp::kTimes;
    case D4M_OP_MIN: return d4m::BinaryOp::kMin;
    case D4M_OP_MAX: return d4m::BinaryOp::kMax;
    case D4M_OP_LAST: return d4m::BinaryOp::kLast;
  }
  d4m::fail(ErrorCode::kInvalidArgument, "unknown operator " + std::to_string(op));
}

d4m::Semiring to_semiring(int sr) {
  switch (sr) {
    case D4M_PLUS_TIMES: return d4m::Semiring::plus_times();
    case D4M_MIN_PLUS: return d4m::Semiring::min_plus();
    case D4M_MAX_TIMES: return d4m::Semiring::max_times();
  }
  d4m::fail(ErrorCode::kInvalidArgument, "unknown semiring " + std::to_string(sr));
}

d4m::Combiner to_combiner(int c) {
  switch (c) {
    case D4M_COMBINER_NONE: return d4m::Combiner::kNone;
    case D4M_COMBINER_SUM: return d4m::Combiner::kSum;
    case D4M_COMBINER_MIN: return d4m::Combiner::kMin;
    case D4M_COMBINER_MAX: return d4m::Combiner::kMax;
    case D4M_COMBINER_LAST: return d4m::Combiner::kLast;
  }
  d4m::fail(ErrorCode::kInvalidArgument, "unknown combiner " + std::to_string(c));
}

d4m::KeySpec spec(const char* text) {
  return text ? d4m::parse_key_spec(text) : d4m::KeySpec::all();
}

d4m::DegreeFilter degree_filter(int64_t lo, int64_t hi) {
  d4m::DegreeFilter f;
  if (lo >= 0) f.min = static_cast<std::uint64_t>(lo);
  if (hi >= 0) f.max = static_cast<std::uint64_t>(hi);
  return f;
}

std::vector<std::string> strings(const char* const* items, size_t n, const char* what) {
  if (n) require(items, what);
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    require(items[i], what);
    out.emplace_back(items[i]);
  }
  return out;
}

d4m::TableRef ref_of(const d4m_store* s, const char* base) {
  require(s, "store");
  require(base, "table base name");
  // With all three tables present bind() only attaches, so read-only callers
  // never mutate the store.
  auto& store = const_cast<d4m::Store&>(s->s);
  const std::string b(base);
  for (const auto& name : {b, b + std::string(d4m::kTransposeSuffix),
                           b + std::string(d4m::kDegreeSuffix)}) {
    if (!store.has_table(name)) d4m::fail(ErrorCode::kInvalidArgument, "no table " + name);
  }
  return d4m::bind(store, base);
}

template <typename Op>
d4m_status unary(const d4m_assoc* a, d4m_assoc** out, Op&& op) {
  return guarded([&] {
    require(a, "array");
    require(out, "out");
    *out = wrap(op(a->a));
  });
}

}  // namespace

extern "C" {

const char* d4m_last_error(void) { return g_last_error.c_str(); }
const char* d4m_version(void) { return "3.0.0"; }
void d4m_string_free(char* s) { std::free(s); }

d4m_status d4m_assoc_from_num(const char* const* rows, const char* const* cols,
                              const double* vals, size_t n, int collision, d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    if (n) require(vals, "values");
    auto r = strings(rows, n, "row keys");
    auto c = strings(cols, n, "column keys");
    *out = wrap(d4m::assoc_from_num(r, c, std::span<const double>(vals, n), to_collision(collision)));
  });
}

d4m_status d4m_assoc_from_str(const char* const* rows, const char* const* cols,
                              const char* const* vals, size_t n, int collision, d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    auto r = strings(rows, n, "row keys");
    auto c = strings(cols, n, "column keys");
    auto v = strings(vals, n, "values");
    std::vector<d4m::Value> values(v.begin(), v.end());
    *out = wrap(d4m::assoc_from_triples(r, c, values, to_collision(collision)));
  });
}

d4m_status d4m_assoc_read_tsv(const char* path, int kind, int collision, d4m_assoc** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(d4m::read_assoc_file(path, kind == D4M_STR ? d4m::ValueKind::kStr
                                                           : d4m::ValueKind::kNum,
                                     to_collision(collision)));
  });
}

d4m_status d4m_assoc_to_tsv(const d4m_assoc* a, char** out) {
  return guarded([&] {
    require(a, "array");
    require(out, "out");
    *out = dup_string(d4m::assoc_to_tsv(a->a));
  });
}

d4m_status d4m_assoc_clone(const d4m_assoc* a, d4m_assoc** out) {
  return unary(a, out, [](const d4m::AssocArray& x) { return x; });
}

void d4m_assoc_free(d4m_assoc* a) { delete a; }

int d4m_assoc_kind(const d4m_assoc* a) {
  return a && !a->a.is_num() ? D4M_STR : D4M_NUM;
}

size_t d4m_assoc_nnz(const d4m_assoc* a) { return a ? a->a.nnz() : 0; }

void d4m_assoc_dims(const d4m_assoc* a, size_t* rows, size_t* cols) {
  const auto d = a ? a->a.dims() : std::pair<std::size_t, std::size_t>{0, 0};
  if (rows) *rows = d.first;
  if (cols) *cols = d.second;
}

d4m_status d4m_assoc_entry(const d4m_assoc* a, size_t i, const char** row, const char** col,
                           double* num, const char** str) {
  return guarded([&] {
    require(a, "array");
    const auto& x = a->a;
    if (i >= x.nnz()) d4m::fail(ErrorCode::kInvalidArgument, "entry index out of range");
    // Row r owns [row_begin(r), row_end(r)); find the first row ending past i.
    std::size_t lo = 0, hi = x.row_keys().size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (x.row_end(mid) <= i) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (row) *row = x.row_keys()[lo].c_str();
    if (col) *col = x.col_keys()[x.col_index(i)].c_str();
    if (num) *num = x.is_num() ? x.num(i) : 0.0;
    if (str) *str = x.is_num() ? nullptr : x.str(i).c_str();
  });
}

d4m_status d4m_assoc_subref(const d4m_assoc* a, const char* rows, const char* cols,
                            d4m_assoc** out) {
  return unary(a, out, [&](const d4m::AssocArray& x) {
    return d4m::subref(x, spec(rows), spec(cols));
  });
}

d4m_status d4m_assoc_transpose(const d4m_assoc* a, d4m_assoc** out) {
  return unary(a, out, [](const d4m::AssocArray& x) { return d4m::transpose(x); });
}

d4m_status d4m_assoc_logical(const d4m_assoc* a, d4m_assoc** out) {
  return unary(a, out, [](const d4m::AssocArray& x) { return d4m::logical(x); });
}

d4m_status d4m_assoc_ew_add(const d4m_assoc* a, const d4m_assoc* b, int op, d4m_assoc** out) {
  return guarded([&] {
    require(a, "array");
    require(b, "array");
    require(out, "out");
    *out = wrap(d4m::ew_add(a->a, b->a, to_binop(op)));
  });
}

d4m_status d4m_assoc_ew_mult(const d4m_assoc* a, const d4m_assoc* b, int op, d4m_assoc** out) {
  return guarded([&] {
    require(a, "array");
    require(b, "array");
    require(out, "out");
    *out = wrap(d4m::ew_mult(a->a, b->a, to_binop(op)));
  });
}

d4m_status d4m_assoc_matmul(const d4m_assoc* a, const d4m_assoc* b, int semiring,
                            unsigned threads, d4m_assoc** out) {
  return guarded([&] {
    require(a, "array");
    require(b, "array");
    require(out, "out");
    d4m::MatmulOptions opts;
    opts.threads = threads ? threads : 1;
    *out = wrap(d4m::matmul(a->a, b->a, to_semiring(semiring), opts));
  });
}

d4m_status d4m_assoc_reduce_rows(const d4m_assoc* a, d4m_assoc** out) {
  return unary(a, out, [](const d4m::AssocArray& x) { return d4m::reduce_rows(x); });
}

d4m_status d4m_assoc_reduce_cols(const d4m_assoc* a, d4m_assoc** out) {
  return unary(a, out, [](const d4m::AssocArray& x) { return d4m::reduce_cols(x); });
}

int d4m_assoc_equal(const d4m_assoc* a, const d4m_assoc* b) {
  if (!a || !b) return a == b;
  return a->a == b->a ? 1 : 0;
}

// ---------------------------------------------------------------------------

d4m_status d4m_store_new(d4m_store** out) {
  return guarded([&] {
    require(out, "out");
    *out = new d4m_store();
  });
}

void d4m_store_free(d4m_store* s) { delete s; }

d4m_status d4m_store_load(d4m_store* s, const char* dir) {
  return guarded([&] {
    require(s, "store");
    require(dir, "directory");
    s->s.load(dir);
  });
}

d4m_status d4m_store_save(const d4m_store* s, const char* dir) {
  return guarded([&] {
    require(s, "store");
    require(dir, "directory");
    s->s.save(dir);
  });
}

d4m_status d4m_store_create_table(d4m_store* s, const char* name, int combiner) {
  return guarded([&] {
    require(s, "store");
    require(name, "table name");
    s->s.create_table(name, to_combiner(combiner));
  });
}

int d4m_store_has_table(const d4m_store* s, const char* name) {
  return s && name && s->s.has_table(name) ? 1 : 0;
}

d4m_status d4m_store_put(d4m_store* s, const char* table, const char* row, const char* col,
                         const char* value) {
  return guarded([&] {
    require(s, "store");
    require(table, "table");
    require(row, "row");
    require(col, "column");
    require(value, "value");
    s->s.table(table).put(row, col, value);
  });
}

d4m_status d4m_store_delete(d4m_store* s, const char* table, const char* row, const char* col) {
  return guarded([&] {
    require(s, "store");
    require(table, "table");
    require(row, "row");
    require(col, "column");
    s->s.table(table).remove(row, col);
  });
}

d4m_status d4m_store_flush(d4m_store* s, const char* table) {
  return guarded([&] {
    require(s, "store");
    require(table, "table");
    s->s.table(table).flush();
  });
}

d4m_status d4m_store_compact(d4m_store* s, const char* table) {
  return guarded([&] {
    require(s, "store");
    require(table, "table");
    s->s.table(table).compact();
  });
}

d4m_status d4m_store_scan_tsv(const d4m_store* s, const char* table, const char* rows,
                              const char* cols, char** out) {
  return guarded([&] {
    require(s, "store");
    require(table, "table");
    require(out, "out");
    std::string text;
    for (const auto& e : s->s.table(table).scan_all(spec(rows), spec(cols))) {
      text.append(e.row).append("\t").append(e.col).append("\t").append(e.value).append("\n");
    }
    *out = dup_string(text);
  });
}

d4m_status d4m_store_scan_count(const d4m_store* s, const char* table, uint64_t* out) {
  return guarded([&] {
    require(s, "store");
    require(table, "table");
    require(out, "out");
    *out = s->s.table(table).scan_count();
  });
}

// ---------------------------------------------------------------------------

d4m_status d4m_bind(d4m_store* s, const char* base) {
  return guarded([&] {
    require(s, "store");
    require(base, "table base name");
    d4m::bind(s->s, base);
  });
}

d4m_status d4m_ingest_assoc(d4m_store* s, const char* base, const d4m_assoc* a) {
  return guarded([&] {
    require(s, "store");
    require(base, "table base name");
    require(a, "array");
    d4m::ingest_assoc(d4m::bind(s->s, base), a->a);
  });
}

d4m_status d4m_ingest_tsv(d4m_store* s, const char* base, const char* path, int exploded,
                          char delim, uint64_t* count) {
  return guarded([&] {
    require(s, "store");
    require(base, "table base name");
    require(path, "path");
    auto entries = d4m::read_triple_file(path);
    if (exploded) {
      for (auto& e : entries) e = d4m::encode_exploded(e.row, e.col, e.value, delim);
    }
    d4m::ingest_entries(d4m::bind(s->s, base), entries);
    if (count) *count = entries.size();
  });
}

d4m_status d4m_query(const d4m_store* s, const char* base, const char* rows, const char* cols,
                     d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(d4m::query(ref_of(s, base), spec(rows), spec(cols)));
  });
}

d4m_status d4m_query_tsv(const d4m_store* s, const char* base, const char* rows,
                         const char* cols, char** out) {
  return guarded([&] {
    require(out, "out");
    std::string text;
    for (const auto& e : d4m::query_entries(ref_of(s, base), spec(rows), spec(cols))) {
      text.append(e.row).append("\t").append(e.col).append("\t").append(e.value).append("\n");
    }
    *out = dup_string(text);
  });
}

d4m_status d4m_degree(const d4m_store* s, const char* base, const char* keys, d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(d4m::degree(ref_of(s, base), spec(keys)));
  });
}

d4m_status d4m_tablemult(d4m_store* s, const char* a, const char* b, const char* c,
                         int semiring, size_t memory_cap, d4m_tablemult_stats* stats) {
  return guarded([&] {
    require(s, "store");
    require(a, "table A");
    require(b, "table B");
    require(c, "table C");
    d4m::MemoryBudget budget(memory_cap);
    auto st = d4m::tablemult(s->s, a, b, c, to_semiring(semiring), budget);
    if (stats) *stats = d4m_tablemult_stats{st.partial_products, st.inner_rows, st.peak_bytes};
  });
}

// ---------------------------------------------------------------------------

d4m_status d4m_bfs_assoc(const d4m_assoc* adj, const char* seeds, size_t hops,
                         int64_t min_degree, int64_t max_degree, d4m_assoc** out) {
  return unary(adj, out, [&](const d4m::AssocArray& x) {
    return d4m::bfs(x, spec(seeds), hops, degree_filter(min_degree, max_degree));
  });
}

d4m_status d4m_bfs_table(d4m_store* s, const char* base, const char* seeds, size_t hops,
                         int64_t min_degree, int64_t max_degree, d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(d4m::bfs(ref_of(s, base), spec(seeds), hops,
                         degree_filter(min_degree, max_degree)));
  });
}

d4m_status d4m_jaccard_assoc(const d4m_assoc* adj, d4m_assoc** out) {
  return unary(adj, out, [](const d4m::AssocArray& x) { return d4m::jaccard(x); });
}

d4m_status d4m_jaccard_table(d4m_store* s, const char* base, d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(d4m::jaccard(ref_of(s, base)));
  });
}

d4m_status d4m_ktruss_assoc(const d4m_assoc* adj, size_t k, d4m_assoc** out) {
  return unary(adj, out, [&](const d4m::AssocArray& x) { return d4m::ktruss(x, k); });
}

d4m_status d4m_ktruss_table(d4m_store* s, const char* base, size_t k, d4m_assoc** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(d4m::ktruss(ref_of(s, base), k));
  });
}

// ---------------------------------------------------------------------------

d4m_status d4m_gen_graph(const char* kind, uint64_t n, double avg_degree, uint64_t seed,
                         char** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    auto k = d4m::graph_kind_from_name(kind);
    if (!k) d4m::fail(ErrorCode::kParse, std::string("unknown graph kind '") + kind + "'");
    std::string text;
    for (const auto& e : d4m::generate_graph(*k, n, avg_degree, seed)) {
      text.append(e.row).append("\t").append(e.col).append("\t").append(e.value).append("\n");
    }
    *out = dup_string(text);
  });
}

d4m_status d4m_bench_tablemult(const int* scales, size_t n_scales, uint64_t seed,
                               size_t memory_cap, unsigned threads, char** csv_out) {
  return guarded([&] {
    if (n_scales) require(scales, "scales");
    require(csv_out, "out");
    d4m::BenchConfig cfg;
    cfg.scales.assign(scales, scales + n_scales);
    cfg.seed = seed;
    cfg.memory_cap = memory_cap;
    cfg.threads = threads ? threads : 1;
    *csv_out = dup_string(d4m::bench_csv(d4m::bench_tablemult(cfg)));
  });
}

d4m_status d4m_gnuplot_script(const char* csv_path, char** out) {
  return guarded([&] {
    require(csv_path, "csv path");
    require(out, "out");
    *out = dup_string(d4m::gnuplot_script(csv_path));
  });
}

}  // extern "C"
