#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "d4m/assoc.hpp"
#include "d4m/memory.hpp"

namespace d4m {

enum class AddOp { kPlus, kMin, kMax };
enum class MultOp { kTimes, kPlus };

// (add, multiply, additive identity). The identity is descriptive: sparse
// accumulation starts from the first contribution, so absent combinations
// never produce an entry.
struct Semiring {
  AddOp add = AddOp::kPlus;
  MultOp mult = MultOp::kTimes;
  double add_identity = 0.0;

  static Semiring plus_times() { return {AddOp::kPlus, MultOp::kTimes, 0.0}; }
  static Semiring min_plus();
  static Semiring max_times() { return {AddOp::kMax, MultOp::kTimes, 0.0}; }

  double combine(double x, double y) const {
    switch (add) {
      case AddOp::kPlus: return x + y;
      case AddOp::kMin: return x < y ? x : y;
      case AddOp::kMax: return x > y ? x : y;
    }
    return x + y;
  }
  double multiply(double x, double y) const {
    return mult == MultOp::kTimes ? x * y : x + y;
  }

  std::string name() const;
  friend bool operator==(const Semiring&, const Semiring&) = default;
};

// Accepts "plus.times", "min.plus" and "max.times".
std::optional<Semiring> semiring_from_name(std::string_view name);

struct MatmulOptions {
  unsigned threads = 1;
  // When set, every output entry is charged against the budget as it is
  // produced and never released; the caller owns the accounting lifetime.
  MemoryBudget* budget = nullptr;
};

struct MatmulStats {
  std::uint64_t partial_products = 0;
};

// C(i,j) = add-fold over shared keys k of mult(A(i,k), B(k,j)). The inner
// dimension is the set of keys that are both column keys of A and row keys
// of B; positions play no role. Zero results are not stored.
AssocArray matmul(const AssocArray& a, const AssocArray& b,
                  const Semiring& sr = Semiring::plus_times(),
                  const MatmulOptions& opts = {}, MatmulStats* stats = nullptr);

// Reserved key for the collapsed dimension of a reduction.
inline constexpr std::string_view kReduceKey = "1";

// Sums every column into a single row keyed "1".
AssocArray reduce_rows(const AssocArray& a);
// Sums every row into a single column keyed "1".
AssocArray reduce_cols(const AssocArray& a);

}  // namespace d4m
