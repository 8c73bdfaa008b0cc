#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d4m/assoc.hpp"

namespace d4m {

// One stored cell. Values are text; numeric interpretation belongs to the
// reader (or to the owning table's combiner).
struct TableEntry {
  std::string row;
  std::string col;
  std::string value;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
  friend auto operator<=>(const TableEntry&, const TableEntry&) = default;
};

// TripleFile: `row<TAB>col<TAB>value<LF>` per record, no header, no escaping.
// Parse errors carry the 1-based line number.
std::vector<TableEntry> parse_triples(std::string_view text, std::string_view source = "<input>");
std::vector<TableEntry> read_triple_file(const std::filesystem::path& path);

void write_triples(std::ostream& os, std::span<const TableEntry> entries);
void write_triple_file(const std::filesystem::path& path, std::span<const TableEntry> entries);

// Text of an array in TripleFile form, row-major, numbers in shortest
// round-trip decimal.
std::string assoc_to_tsv(const AssocArray& a);

// Loads a TripleFile into an array. With kind == kNum every value must parse
// as a decimal float.
AssocArray read_assoc_file(const std::filesystem::path& path, ValueKind kind,
                           std::optional<Collision> collision = {});
AssocArray assoc_from_entries(std::span<const TableEntry> entries, ValueKind kind,
                              std::optional<Collision> collision = {});

std::string read_file(const std::filesystem::path& path);

}  // namespace d4m
