#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d4m/triple_file.hpp"

namespace d4m {

enum class GraphKind { kErdos, kPowerLaw };

std::optional<GraphKind> graph_kind_from_name(std::string_view name);

// "v" followed by the zero-padded index, at least five digits wide so that
// byte-wise key order equals numeric order.
std::string node_key(std::uint64_t index, std::uint64_t node_count);

// Symmetric 0/1 adjacency without self loops, as sorted TripleFile entries
// with value "1". Erdos is G(n, p = avg_degree / n); power-law is
// preferential attachment with round(avg_degree / 2) edges per new node.
// Output is a pure function of the arguments.
std::vector<TableEntry> generate_graph(GraphKind kind, std::uint64_t n, double avg_degree,
                                       std::uint64_t seed);

}  // namespace d4m
