#include "d4m/triple_file.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "d4m/error.hpp"

namespace d4m {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, "read failed for " + path.string());
  return std::move(ss).str();
}

std::vector<TableEntry> parse_triples(std::string_view text, std::string_view source) {
  std::vector<TableEntry> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::kParse,
         std::string(source) + ":" + std::to_string(line_no) + ": " + why);
  };
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) bad("expected three tab-separated fields");
    if (line.find('\t', t2 + 1) != std::string_view::npos) bad("more than three fields");
    std::string_view row = line.substr(0, t1);
    std::string_view col = line.substr(t1 + 1, t2 - t1 - 1);
    std::string_view val = line.substr(t2 + 1);
    if (!is_valid_key(row)) bad("invalid row key");
    if (!is_valid_key(col)) bad("invalid column key");
    if (!is_valid_value_text(val)) bad("invalid value");
    out.push_back(TableEntry{std::string(row), std::string(col), std::string(val)});
  }
  return out;
}

std::vector<TableEntry> read_triple_file(const std::filesystem::path& path) {
  return parse_triples(read_file(path), path.string());
}

void write_triples(std::ostream& os, std::span<const TableEntry> entries) {
  std::string buf;
  for (const auto& e : entries) {
    buf.append(e.row).push_back('\t');
    buf.append(e.col).push_back('\t');
    buf.append(e.value).push_back('\n');
    if (buf.size() > (1u << 16)) {
      os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_triple_file(const std::filesystem::path& path, std::span<const TableEntry> entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  write_triples(out, entries);
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::string assoc_to_tsv(const AssocArray& a) {
  std::string out;
  const auto& rows = a.row_keys();
  const auto& cols = a.col_keys();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) {
      out.append(rows[r]).push_back('\t');
      out.append(cols[a.col_index(e)]).push_back('\t');
      out.append(a.is_num() ? format_number(a.num(e)) : a.str(e)).push_back('\n');
    }
  }
  return out;
}

AssocArray assoc_from_entries(std::span<const TableEntry> entries, ValueKind kind,
                              std::optional<Collision> collision) {
  std::vector<std::string> rows, cols;
  rows.reserve(entries.size());
  cols.reserve(entries.size());
  if (kind == ValueKind::kNum) {
    std::vector<double> vals;
    vals.reserve(entries.size());
    for (const auto& e : entries) {
      auto v = parse_number(e.value);
      if (!v) fail(ErrorCode::kParse, "value '" + e.value + "' is not a decimal number");
      rows.push_back(e.row);
      cols.push_back(e.col);
      vals.push_back(*v);
    }
    return assoc_from_num(rows, cols, vals, collision);
  }
  std::vector<Value> vals;
  vals.reserve(entries.size());
  for (const auto& e : entries) {
    rows.push_back(e.row);
    cols.push_back(e.col);
    vals.emplace_back(e.value);
  }
  return assoc_from_triples(rows, cols, vals, collision);
}

AssocArray read_assoc_file(const std::filesystem::path& path, ValueKind kind,
                           std::optional<Collision> collision) {
  return assoc_from_entries(read_triple_file(path), kind, collision);
}

}  // namespace d4m
