#include <filesystem>
#include <fstream>
#include <random>

#include "d4m/error.hpp"
#include "d4m/kvstore.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace d4m;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("d4m_kv_" + name);
  fs::remove_all(dir);
  return dir;
}

const Combiner kAll[] = {Combiner::kNone, Combiner::kSum, Combiner::kMin, Combiner::kMax,
                         Combiner::kLast};

}  // namespace

TEST_CASE("table names") {
  Store s;
  s.create_table("Edge_1", Combiner::kNone);
  CHECK(code_of([&] { s.create_table("Edge_1", Combiner::kSum); }) == ErrorCode::kConflict);
  CHECK(code_of([&] { s.create_table("bad-name", Combiner::kSum); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { s.create_table("", Combiner::kSum); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { s.table("missing"); }) == ErrorCode::kInvalidArgument);
  CHECK(s.table_names() == std::vector<std::string>{"Edge_1"});
  s.drop_table("Edge_1");
  CHECK_FALSE(s.has_table("Edge_1"));
}

TEST_CASE("combiner names") {
  for (auto c : kAll) CHECK(combiner_from_name(combiner_name(c)) == c);
  CHECK_FALSE(combiner_from_name("avg").has_value());
}

TEST_CASE("combiners") {
  Table sum("s", Combiner::kSum), mn("m", Combiner::kMin), last("l", Combiner::kLast);
  for (auto v : {"3", "1", "+2"}) {
    sum.put("a", "x", v);
    mn.put("a", "x", v);
    last.put("a", "x", v);
  }
  CHECK(sum.get("a", "x") == "6");
  CHECK(mn.get("a", "x") == "1");
  CHECK(last.get("a", "x") == "+2");
  CHECK(code_of([&] { sum.put("a", "x", "abc"); }) == ErrorCode::kParse);
  CHECK(code_of([&] { sum.put("", "x", "1"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { last.put("a", "x", "t\tb"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("combining happens across runs") {
  Table t("t", Combiner::kSum);
  t.put("a", "x", "1");
  t.flush();
  t.put("a", "x", "2");
  t.flush();
  t.put("a", "x", "4");
  CHECK(t.run_count() == 2);
  CHECK(t.get("a", "x") == "7");
  t.compact();
  CHECK(t.run_count() == 1);
  CHECK(t.get("a", "x") == "7");
}

TEST_CASE("delete hides older versions only") {
  Table t("t", Combiner::kSum);
  t.put("a", "x", "5");
  t.flush();
  t.remove("a", "x");
  CHECK_FALSE(t.get("a", "x").has_value());
  t.put("a", "x", "2");
  t.flush();
  CHECK(t.get("a", "x") == "2");
  t.compact();
  CHECK(t.scan_all() == std::vector<TableEntry>{{"a", "x", "2"}});
}

TEST_CASE("scan order and selectors") {
  Table t("t", Combiner::kLast);
  for (auto r : {"a2", "a10", "b", "B"}) {
    t.put(r, "x", "1");
    t.put(r, "y", "2");
  }
  t.flush();
  auto all = t.scan_all();
  REQUIRE(all.size() == 8);
  CHECK(all[0].row == "B");
  CHECK(all[2].row == "a10");
  CHECK(std::is_sorted(all.begin(), all.end()));
  auto ranged = t.scan_all(parse_key_spec("a1,:,a3,"), parse_key_spec("y,"));
  CHECK(ranged == std::vector<TableEntry>{{"a10", "y", "2"}, {"a2", "y", "2"}});
  auto listed = t.scan_all(parse_key_spec("b,zz,"), {});
  CHECK(listed.size() == 2);
}

TEST_CASE("scanner streams rows") {
  Table t("t", Combiner::kNone);
  t.put("a", "x", "1");
  t.put("a", "y", "1");
  t.put("b", "x", "1");
  auto sc = t.scan();
  std::vector<TableEntry> row;
  REQUIRE(sc.next_row(row));
  CHECK(row.size() == 2);
  REQUIRE(sc.next_row(row));
  CHECK(row.size() == 1);
  CHECK_FALSE(sc.next_row(row));
}

TEST_CASE("scans see a snapshot") {
  Table t("t", Combiner::kNone);
  t.put("a", "x", "1");
  t.put("c", "x", "1");
  auto sc = t.scan();
  t.put("b", "x", "1");
  t.remove("c", "x");
  t.flush();
  t.compact();
  std::vector<std::string> rows;
  while (auto e = sc.next()) rows.push_back(e->row);
  CHECK(rows == std::vector<std::string>{"a", "c"});
}

TEST_CASE("row iterators") {
  Table t("t", Combiner::kSum);
  t.put("a", "x", "1");
  t.put("a", "y", "2");
  t.put("b", "x", "5");
  RowIterator row_sum = [](std::span<const TableEntry> row, std::vector<TableEntry>& out) {
    double s = 0;
    for (const auto& e : row) s += *parse_number(e.value);
    out.push_back({row.front().row, "sum", format_number(s)});
  };
  auto got = t.scan_all({}, {}, row_sum);
  CHECK(got == std::vector<TableEntry>{{"a", "sum", "3"}, {"b", "sum", "5"}});

  RowIterator bad = [](std::span<const TableEntry> row, std::vector<TableEntry>& out) {
    out.push_back({row.front().row, "z", "1"});
    out.push_back({row.front().row, "a", "1"});
  };
  CHECK(code_of([&] { t.scan_all({}, {}, bad); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("scan counter") {
  Table t("t", Combiner::kNone);
  CHECK(t.scan_count() == 0);
  t.scan_all();
  (void)t.get("a", "b");
  CHECK(t.scan_count() >= 1);
}

TEST_CASE("auto flush and compaction") {
  Table t("t", Combiner::kSum);
  t.set_auto_flush(10, 3);
  for (int i = 0; i < 100; ++i) t.put(testutil::key("r", i % 17), "x", "1");
  CHECK(t.buffered() < 10);
  CHECK(t.run_count() <= 3);
  std::size_t total = 0;
  for (const auto& e : t.scan_all()) total += std::stoi(e.value);
  CHECK(total == 100);
}

TEST_CASE("flush placement does not change scans") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    const Combiner c = kAll[iter % 5];
    Table t("t", c);
    testutil::ReplayOracle o(c);
    for (int step = 0; step < 60; ++step) testutil::random_op(rng, t, o, 8);
    CHECK(t.scan_all() == o.scan());
  }
}

TEST_CASE("snapshot round trip") {
  Store s;
  auto& a = s.create_table("A", Combiner::kSum);
  auto& b = s.create_table("B", Combiner::kLast);
  a.put("r1", "c", "2");
  a.flush();
  a.put("r1", "c", "3");
  b.put("x", "y", "hello world");
  b.put("x", "z", "");
  s.create_table("Empty", Combiner::kMax);
  auto dir = fresh_dir("snap");
  s.save(dir);

  Store t;
  t.load(dir);
  CHECK(t.table_names() == s.table_names());
  for (const auto& name : s.table_names()) {
    CHECK(t.table(name).scan_all() == s.table(name).scan_all());
    CHECK(t.table(name).combiner() == s.table(name).combiner());
  }
  auto dir2 = fresh_dir("snap2");
  t.save(dir2);
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(read_file(entry.path()) == read_file(dir2 / entry.path().filename()));
  }
}

TEST_CASE("snapshot load errors") {
  Store s;
  CHECK(code_of([&] { s.load(fresh_dir("missing")); }) == ErrorCode::kIo);
  auto empty = fresh_dir("empty");
  fs::create_directories(empty);
  s.load(empty);
  CHECK(s.table_names().empty());

  auto bad = fresh_dir("bad");
  fs::create_directories(bad);
  std::ofstream(bad / "MANIFEST.tsv") << "T\tsum\n";
  std::ofstream(bad / "T.tsv") << "b\tx\t1\na\tx\t1\n";
  CHECK(code_of([&] { Store().load(bad); }) == ErrorCode::kParse);
  std::ofstream(bad / "T.tsv") << "a\tx\n";
  CHECK(code_of([&] { Store().load(bad); }) == ErrorCode::kParse);
}

TEST_CASE("triple text") {
  auto entries = parse_triples("a\tb\t1\nc\td\t\n");
  CHECK(entries == std::vector<TableEntry>{{"a", "b", "1"}, {"c", "d", ""}});
  try {
    parse_triples("a\tb\t1\nbroken\n", "f.tsv");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("f.tsv:2") != std::string::npos);
  }
}

TEST_CASE("bulk put equals puts then flush") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> k(0, 7), v(1, 9), len(0, 40);
  for (int iter = 0; iter < 200; ++iter) {
    const Combiner c = kAll[iter % 5];
    Table t("t", c);
    testutil::ReplayOracle o(c);
    for (int step = 0; step < 20; ++step) testutil::random_op(rng, t, o, 8);
    const auto before = o.scan();

    std::vector<TableEntry> batch;
    for (int i = len(rng); i > 0; --i) {
      batch.push_back({testutil::key("r", k(rng)), testutil::key("c", k(rng) % 6),
                       std::to_string(v(rng))});
    }
    std::set<std::pair<std::string, std::string>> reported;
    t.bulk_put(batch, [&](std::string_view r, std::string_view col) {
      CHECK(reported.emplace(std::string(r), std::string(col)).second);
    });
    for (const auto& e : batch) o.put(e.row, e.col, e.value);
    CHECK(t.scan_all() == o.scan());
    CHECK(t.buffered() == 0);

    std::set<std::pair<std::string, std::string>> expect;
    for (const auto& e : batch) expect.emplace(e.row, e.col);
    for (const auto& e : before) expect.erase({e.row, e.col});
    CHECK(reported == expect);
  }
}
