#include <map>
#include <random>

#include "d4m/error.hpp"
#include "d4m/schema.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace d4m;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

// Degree oracle: count stored cells per row of the edge table.
std::map<std::string, double> row_counts(const Table& t) {
  std::map<std::string, double> out;
  for (const auto& e : t.scan_all()) out[e.row] += 1;
  return out;
}

std::map<std::string, double> degree_map(const AssocArray& d) {
  std::map<std::string, double> out;
  for (const auto& t : d.to_triples()) out[t.row] = std::get<double>(t.value);
  return out;
}

Table& make_table(Store& s, const std::string& name, const AssocArray& a,
                  Combiner c = Combiner::kSum) {
  auto& t = s.create_table(name, c);
  for (const auto& tr : a.to_triples()) t.put(tr.row, tr.col, render_value(tr.value));
  t.flush();
  return t;
}

}  // namespace

TEST_CASE("bind creates and reattaches") {
  Store s;
  auto ref = d4m::bind(s, "G");
  CHECK(s.table_names() == std::vector<std::string>{"G", "G_Deg", "G_T"});
  CHECK(ref.degree->combiner() == Combiner::kSum);
  CHECK(d4m::bind(s, "G") == ref);
  Store other;
  other.create_table("H_Deg", Combiner::kLast);
  CHECK(code_of([&] { d4m::bind(other, "H"); }) == ErrorCode::kConflict);
}

TEST_CASE("ingest writes three tables") {
  Store s;
  auto ref = d4m::bind(s, "G");
  std::vector<TableEntry> in{{"a", "x", "1"}, {"a", "y", "1"}, {"b", "x", "1"}};
  ingest_entries(ref, in);
  CHECK(ref.edge->scan_all() == in);
  CHECK(ref.edge_t->scan_all() ==
        std::vector<TableEntry>{{"x", "a", "1"}, {"x", "b", "1"}, {"y", "a", "1"}});
  auto d = degree(ref, KeySpec::all());
  CHECK(d.col_keys() == std::vector<std::string>{"Degree"});
  CHECK(d.at("a", "Degree") == Value(2.0));
  CHECK(d.at("b", "Degree") == Value(1.0));
  // Re-ingesting an existing cell does not bump the degree.
  ingest_entries(ref, std::vector<TableEntry>{{"a", "x", "7"}, {"c", "z", "1"}});
  d = degree(ref, KeySpec::all());
  CHECK(d.at("a", "Degree") == Value(2.0));
  CHECK(d.at("c", "Degree") == Value(1.0));
  CHECK(degree(ref, parse_key_spec("c,")).nnz() == 1);
}

TEST_CASE("round trip, degrees and routing on random arrays") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 30; ++iter) {
    Store s;
    auto ref = d4m::bind(s, "T");
    auto a = testutil::random_num(rng, 25, 25, 0.15);
    ingest_assoc(ref, a);
    CHECK(query(ref, KeySpec::all(), KeySpec::all()) == a);
    CHECK(degree_map(degree(ref, KeySpec::all())) == row_counts(*ref.edge));

    const auto edge_scans = ref.edge->scan_count();
    const auto t_scans = ref.edge_t->scan_count();
    auto cols = parse_key_spec("c003,c010,c020,");
    auto got = query(ref, KeySpec::all(), cols);
    CHECK(got == subref(a, KeySpec::all(), cols));
    CHECK(ref.edge->scan_count() == edge_scans);
    CHECK(ref.edge_t->scan_count() == t_scans + 1);

    auto rows = parse_key_spec("r002,:,r010,");
    CHECK(query(ref, rows, cols) == subref(a, rows, cols));
    CHECK(ref.edge->scan_count() == edge_scans + 1);
  }
}

TEST_CASE("string values survive") {
  Store s;
  auto ref = d4m::bind(s, "S");
  std::vector<std::string> r{"doc1", "doc2"}, c{"title", "title"};
  std::vector<Value> v{std::string("a b"), std::string("12x")};
  auto a = assoc_from_triples(r, c, v);
  ingest_assoc(ref, a);
  CHECK(query(ref, KeySpec::all(), KeySpec::all()) == a);
}

TEST_CASE("exploded encoding") {
  auto e = encode_exploded("doc1", "author", "Kepner");
  CHECK(e == TableEntry{"doc1", "author|Kepner", "1"});
  CHECK(decode_exploded(e) == ExplodedCell{"doc1", "author", "Kepner"});
  CHECK(decode_exploded({"d", "a|b|c", "1"}) == ExplodedCell{"d", "a", "b|c"});
  CHECK(encode_exploded("d", "k", "v", ';').col == "k;v");
  CHECK(code_of([] { encode_exploded("d", "a|b", "v"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { decode_exploded({"d", "nodelim", "1"}); }) == ErrorCode::kParse);
}

TEST_CASE("tablemult example") {
  Store s;
  // A' * B with A = {k1: (x 1, y 2)}, B = {k1: (p 3)}.
  make_table(s, "A", assoc_from_num(std::vector<std::string>{"k1", "k1"},
                                    std::vector<std::string>{"x", "y"},
                                    std::vector<double>{1, 2}));
  make_table(s, "B", assoc_from_num(std::vector<std::string>{"k1", "k2"},
                                    std::vector<std::string>{"p", "p"},
                                    std::vector<double>{3, 4}));
  s.create_table("C", Combiner::kSum);
  MemoryBudget budget;
  auto st = tablemult(s, "A", "B", "C", Semiring::plus_times(), budget);
  CHECK(st.partial_products == 2);
  CHECK(st.inner_rows == 1);
  CHECK(s.table("C").scan_all() == std::vector<TableEntry>{{"x", "p", "3"}, {"y", "p", "6"}});
  // C += : running it again doubles the result.
  tablemult(s, "A", "B", "C", Semiring::plus_times(), budget);
  CHECK(s.table("C").get("y", "p") == "12");
  CHECK(budget.in_use() == 0);
}

TEST_CASE("tablemult equals client multiply") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> n(1, 30);
  for (int iter = 0; iter < 30; ++iter) {
    Store s;
    const int k = n(rng);
    auto a = testutil::random_num(rng, k, n(rng), 0.2, 9, "k", "i");
    auto b = testutil::random_num(rng, k, n(rng), 0.2, 9, "k", "j");
    make_table(s, "A", a);
    make_table(s, "B", b);
    s.create_table("C", Combiner::kSum);
    s.create_table("M", Combiner::kMin);
    MemoryBudget budget;
    tablemult(s, "A", "B", "C", Semiring::plus_times(), budget);
    tablemult(s, "A", "B", "M", Semiring::min_plus(), budget);
    CHECK(assoc_from_stored(s.table("C").scan_all()) == matmul(transpose(a), b));
    CHECK(assoc_from_stored(s.table("M").scan_all()) ==
          matmul(transpose(a), b, Semiring::min_plus()));
  }
}

TEST_CASE("tablemult memory contract") {
  std::mt19937_64 rng(43);
  Store s;
  auto a = testutil::random_num(rng, 20, 20, 0.3);
  make_table(s, "A", a);
  s.create_table("C", Combiner::kSum);
  s.create_table("Wrong", Combiner::kMax);
  MemoryBudget unlimited;
  CHECK(code_of([&] { tablemult(s, "A", "A", "Wrong", Semiring::plus_times(), unlimited); }) ==
        ErrorCode::kConflict);

  // Largest row pair plus a little room for the put batch is enough.
  std::size_t max_row = 0;
  std::map<std::string, std::size_t> per_row;
  for (const auto& e : s.table("A").scan_all()) {
    per_row[e.row] += entry_bytes(e.row, e.col, e.value.size());
  }
  for (const auto& [_, b] : per_row) max_row = std::max(max_row, b);
  MemoryBudget capped(2 * max_row + 64);
  auto st = tablemult(s, "A", "A", "C", Semiring::plus_times(), capped);
  CHECK(st.peak_bytes <= capped.cap());
  CHECK(assoc_from_stored(s.table("C").scan_all()) == matmul(transpose(a), a));

  MemoryBudget tiny(max_row / 2);
  CHECK(code_of([&] { tablemult(s, "A", "A", "C", Semiring::plus_times(), tiny); }) ==
        ErrorCode::kMemoryCap);
}

TEST_CASE("combiner for semiring") {
  CHECK(combiner_for(Semiring::plus_times()) == Combiner::kSum);
  CHECK(combiner_for(Semiring::min_plus()) == Combiner::kMin);
  CHECK(combiner_for(Semiring::max_times()) == Combiner::kMax);
}

TEST_CASE("logical tablemult on text values") {
  Store s;
  auto& a = s.create_table("A", Combiner::kLast);
  a.put("k", "x", "red");
  a.put("k", "y", "blue");
  s.create_table("C", Combiner::kSum);
  MemoryBudget b;
  CHECK(code_of([&] { tablemult(s, "A", "A", "C", Semiring::plus_times(), b); }) ==
        ErrorCode::kParse);
  TableMultOptions opts;
  opts.logical = true;
  s.drop_table("C");
  s.create_table("C", Combiner::kSum);
  tablemult(s, "A", "A", "C", Semiring::plus_times(), b, opts);
  CHECK(s.table("C").scan_all().size() == 4);
}
