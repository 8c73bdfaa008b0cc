#include "d4m/kernels.hpp"

#include <algorithm>
#include <limits>
#include <thread>
#include <vector>

#include "d4m/error.hpp"

namespace d4m {

Semiring Semiring::min_plus() {
  return {AddOp::kMin, MultOp::kPlus, std::numeric_limits<double>::infinity()};
}

std::string Semiring::name() const {
  std::string out;
  switch (add) {
    case AddOp::kPlus: out = "plus"; break;
    case AddOp::kMin: out = "min"; break;
    case AddOp::kMax: out = "max"; break;
  }
  out += mult == MultOp::kTimes ? ".times" : ".plus";
  return out;
}

std::optional<Semiring> semiring_from_name(std::string_view name) {
  if (name == "plus.times") return Semiring::plus_times();
  if (name == "min.plus") return Semiring::min_plus();
  if (name == "max.times") return Semiring::max_times();
  return std::nullopt;
}

namespace {

constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

void require_num(const AssocArray& a, const char* what) {
  if (!a.is_num()) {
    fail(ErrorCode::kKindMismatch,
         std::string(what) + " requires Num arrays; apply logical() to Str arrays first");
  }
}

// Output of one block of A rows: compressed rows in A-row order.
struct RowBlock {
  std::vector<std::uint32_t> row;  // A row index, one per non-empty output row
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;
  std::uint64_t partial_products = 0;
};

// Gustavson row-by-row accumulation over rows [first, last) of A.
void multiply_rows(const AssocArray& a, const AssocArray& b, const Semiring& sr,
                   const std::vector<std::uint32_t>& inner, std::size_t first,
                   std::size_t last, MemoryBudget* budget, RowBlock& out) {
  const std::size_t ncols = b.col_keys().size();
  std::vector<double> acc(ncols, 0.0);
  std::vector<std::size_t> stamp(ncols, std::numeric_limits<std::size_t>::max());
  std::vector<std::uint32_t> touched;

  for (std::size_t i = first; i < last; ++i) {
    touched.clear();
    for (std::size_t ea = a.row_begin(i); ea < a.row_end(i); ++ea) {
      const std::uint32_t k = inner[a.col_index(ea)];
      if (k == kAbsent) continue;
      const double av = a.num(ea);
      for (std::size_t eb = b.row_begin(k); eb < b.row_end(k); ++eb) {
        const std::uint32_t j = b.col_index(eb);
        const double p = sr.multiply(av, b.num(eb));
        if (stamp[j] != i) {
          stamp[j] = i;
          acc[j] = p;
          touched.push_back(j);
        } else {
          acc[j] = sr.combine(acc[j], p);
        }
        ++out.partial_products;
      }
    }
    if (touched.empty()) continue;
    std::sort(touched.begin(), touched.end());

    std::size_t row_bytes = 0;
    const std::size_t before = out.col.size();
    for (auto j : touched) {
      if (acc[j] == 0.0) continue;
      out.col.push_back(j);
      out.val.push_back(acc[j]);
      row_bytes += entry_bytes(a.row_keys()[i], b.col_keys()[j], kNumValueBytes);
    }
    if (out.col.size() == before) continue;
    if (budget) budget->charge(row_bytes);
    out.row.push_back(static_cast<std::uint32_t>(i));
    out.ptr.push_back(out.col.size());
  }
}

}  // namespace

AssocArray matmul(const AssocArray& a, const AssocArray& b, const Semiring& sr,
                  const MatmulOptions& opts, MatmulStats* stats) {
  require_num(a, "matmul");
  require_num(b, "matmul");

  // inner[c] = row of B whose key equals column key c of A.
  const auto& ac = a.col_keys();
  const auto& br = b.row_keys();
  std::vector<std::uint32_t> inner(ac.size(), kAbsent);
  for (std::size_t i = 0, j = 0; i < ac.size() && j < br.size();) {
    if (ac[i] < br[j]) {
      ++i;
    } else if (br[j] < ac[i]) {
      ++j;
    } else {
      inner[i++] = static_cast<std::uint32_t>(j++);
    }
  }

  const std::size_t nrows = a.row_keys().size();
  const unsigned threads =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(nrows / 64 + 1)));
  std::vector<RowBlock> blocks(threads);
  if (threads == 1) {
    multiply_rows(a, b, sr, inner, 0, nrows, opts.budget, blocks[0]);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (nrows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(nrows, t * chunk);
      const std::size_t hi = std::min(nrows, lo + chunk);
      pool.emplace_back([&, t, lo, hi] {
        try {
          multiply_rows(a, b, sr, inner, lo, hi, opts.budget, blocks[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  AssocBuilder out(ValueKind::kNum, b.col_keys());
  std::uint64_t pp = 0;
  for (const auto& blk : blocks) {
    pp += blk.partial_products;
    for (std::size_t r = 0; r < blk.row.size(); ++r) {
      const auto& key = a.row_keys()[blk.row[r]];
      for (std::size_t e = blk.ptr[r]; e < blk.ptr[r + 1]; ++e) {
        out.add_num_at(key, blk.col[e], blk.val[e]);
      }
    }
  }
  if (stats) stats->partial_products = pp;
  return std::move(out).build();
}

AssocArray reduce_cols(const AssocArray& a) {
  require_num(a, "reduce_cols");
  AssocBuilder out(ValueKind::kNum);
  for (std::size_t r = 0; r < a.row_keys().size(); ++r) {
    double sum = 0.0;
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) sum += a.num(e);
    out.add_num(a.row_keys()[r], kReduceKey, sum);
  }
  return std::move(out).build();
}

AssocArray reduce_rows(const AssocArray& a) {
  require_num(a, "reduce_rows");
  std::vector<double> sums(a.col_keys().size(), 0.0);
  for (std::size_t e = 0; e < a.nnz(); ++e) sums[a.col_index(e)] += a.num(e);
  AssocBuilder out(ValueKind::kNum, a.col_keys());
  for (std::size_t c = 0; c < sums.size(); ++c) {
    out.add_num_at(kReduceKey, static_cast<std::uint32_t>(c), sums[c]);
  }
  return std::move(out).build();
}

}  // namespace d4m
