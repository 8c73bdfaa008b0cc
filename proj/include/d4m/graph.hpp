#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "d4m/assoc.hpp"
#include "d4m/keys.hpp"
#include "d4m/schema.hpp"

namespace d4m {

// Inclusive bounds on the degree of a frontier row.
struct DegreeFilter {
  std::optional<std::uint64_t> min;
  std::optional<std::uint64_t> max;

  bool admits(std::uint64_t d) const {
    return (!min || d >= *min) && (!max || d <= *max);
  }
  bool active() const { return min.has_value() || max.has_value(); }
};

// Either an adjacency array held in memory or a bound table group whose
// edge table is the adjacency.
using GraphView = std::variant<std::reference_wrapper<const AssocArray>, TableRef>;

// Union of the edge sets traversed in `hops` expansion steps from the seed
// rows. Frontier rows outside the degree filter are not expanded. Values are
// 1.0; hops == 0 yields an empty array.
AssocArray bfs(const AssocArray& adj, const KeySpec& seeds, std::size_t hops,
               const DegreeFilter& filter = {});
AssocArray bfs(const TableRef& ref, const KeySpec& seeds, std::size_t hops,
               const DegreeFilter& filter = {});

// Jaccard coefficient |N(i) & N(j)| / |N(i) | N(j)| for every pair with a
// common neighbor, stored once at (min key, max key). The adjacency must be
// symmetric, 0/1 and free of self loops (ErrorCode::kValidation otherwise).
AssocArray jaccard(const AssocArray& adj);
// In-store variant: A*A is computed with tablemult into a scratch table.
AssocArray jaccard(const TableRef& ref);

// Maximal subgraph whose every edge lies on at least k-2 triangles of the
// subgraph, computed by deleting all under-supported edges per round.
AssocArray ktruss(const AssocArray& adj, std::size_t k);
// In-store variant: deletes edges from the edge and transpose tables (and
// adjusts degrees) in place, then returns the remaining adjacency.
AssocArray ktruss(const TableRef& ref, std::size_t k);

AssocArray bfs(const GraphView& g, const KeySpec& seeds, std::size_t hops,
               const DegreeFilter& filter = {});
AssocArray jaccard(const GraphView& g);
AssocArray ktruss(const GraphView& g, std::size_t k);

// Returns the 0/1 Num adjacency (Str arrays go through logical()) after
// checking it is symmetric with an empty diagonal.
AssocArray checked_adjacency(const AssocArray& adj);
void validate_stored_adjacency(const TableRef& ref);

}  // namespace d4m
