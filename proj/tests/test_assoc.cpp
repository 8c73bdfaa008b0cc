#include <algorithm>
#include <cmath>
#include <random>

#include "d4m/assoc.hpp"
#include "d4m/error.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace d4m;
using testutil::Dense;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

AssocArray num3(std::vector<std::string> r, std::vector<std::string> c, std::vector<double> v,
                std::optional<Collision> col = {}) {
  return assoc_from_num(r, c, v, col);
}

// Support and ordering invariants every array must satisfy.
void check_invariants(const AssocArray& a) {
  CHECK(std::is_sorted(a.row_keys().begin(), a.row_keys().end()));
  CHECK(std::adjacent_find(a.row_keys().begin(), a.row_keys().end()) == a.row_keys().end());
  CHECK(std::is_sorted(a.col_keys().begin(), a.col_keys().end()));
  std::vector<bool> col_used(a.col_keys().size(), false);
  for (std::size_t r = 0; r < a.row_keys().size(); ++r) {
    CHECK(a.row_end(r) > a.row_begin(r));
    for (std::size_t e = a.row_begin(r); e < a.row_end(r); ++e) {
      col_used[a.col_index(e)] = true;
      if (e > a.row_begin(r)) CHECK(a.col_index(e - 1) < a.col_index(e));
      CHECK_FALSE(is_zero(a.value(e)));
    }
  }
  CHECK(std::all_of(col_used.begin(), col_used.end(), [](bool b) { return b; }));
}

}  // namespace

TEST_CASE("construction merges duplicates") {
  auto a = num3({"a", "a", "b"}, {"x", "x", "y"}, {1, 2, 5});
  CHECK(a.nnz() == 2);
  CHECK(a.at("a", "x") == Value(3.0));
  auto m = num3({"a", "a"}, {"x", "x"}, {4, 2}, Collision::kMin);
  CHECK(m.at("a", "x") == Value(2.0));
  auto l = num3({"a", "a"}, {"x", "x"}, {4, 2}, Collision::kLast);
  CHECK(l.at("a", "x") == Value(2.0));

  std::vector<std::string> r{"a", "a"}, c{"x", "x"};
  std::vector<Value> sv{std::string("p"), std::string("q")};
  auto s = assoc_from_triples(r, c, sv);
  CHECK(s.kind() == ValueKind::kStr);
  CHECK(s.at("a", "x") == Value(std::string("q")));
  CHECK(code_of([&] { assoc_from_triples(r, c, sv, Collision::kSum); }) ==
        ErrorCode::kKindMismatch);
}

TEST_CASE("zeros are never stored") {
  auto a = num3({"a", "b", "c"}, {"x", "y", "z"}, {0, 1, 0});
  CHECK(a.nnz() == 1);
  CHECK(a.row_keys() == std::vector<std::string>{"b"});
  CHECK(a.col_keys() == std::vector<std::string>{"y"});
  auto cancel = num3({"a", "a"}, {"x", "x"}, {2, -2});
  CHECK(cancel.empty());
  CHECK(cancel.dims() == std::pair<std::size_t, std::size_t>{0, 0});
}

TEST_CASE("construction errors") {
  CHECK(code_of([] { num3({"a"}, {"x", "y"}, {1}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { num3({""}, {"x"}, {1}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { num3({"a"}, {"x"}, {std::nan("")}); }) == ErrorCode::kInvalidArgument);
  std::vector<std::string> r{"a", "b"}, c{"x", "y"};
  std::vector<Value> mixed{1.0, std::string("s")};
  CHECK(code_of([&] { assoc_from_triples(r, c, mixed); }) == ErrorCode::kKindMismatch);
}

TEST_CASE("byte-wise key order") {
  auto a = num3({"a10", "a2", "B"}, {"x", "x", "x"}, {1, 2, 3});
  CHECK(a.row_keys() == std::vector<std::string>{"B", "a10", "a2"});
}

TEST_CASE("subref examples") {
  auto a = num3({"a", "b", "c"}, {"x", "y", "z"}, {1, 2, 3});
  auto s = subref(a, parse_key_spec("a,c,"), KeySpec::all());
  CHECK(s.row_keys() == std::vector<std::string>{"a", "c"});
  CHECK(s.col_keys() == std::vector<std::string>{"x", "z"});
  auto r = subref(a, parse_key_spec("b,:,c,"), parse_key_spec("z,"));
  CHECK(r.nnz() == 1);
  CHECK(r.at("c", "z") == Value(3.0));
  CHECK(subref(a, parse_key_spec("q,"), KeySpec::all()).empty());
  CHECK(subref(a, KeySpec::all(), KeySpec::all()) == a);
}

TEST_CASE("subref matches a filter oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> n(1, 20), pick(0, 25);
  for (int iter = 0; iter < 200; ++iter) {
    auto a = testutil::random_num(rng, n(rng), n(rng), 0.3);
    auto make_spec = [&](const char* prefix) {
      switch (pick(rng) % 3) {
        case 0: return KeySpec::all();
        case 1: {
          std::vector<std::string> keys;
          for (int i = 0; i < 5; ++i) keys.push_back(testutil::key(prefix, pick(rng)));
          return KeySpec::list(keys);
        }
        default: {
          auto x = testutil::key(prefix, pick(rng)), y = testutil::key(prefix, pick(rng));
          if (y < x) std::swap(x, y);
          return KeySpec::range(x, y);
        }
      }
    };
    auto rs = make_spec("r"), cs = make_spec("c");
    std::vector<Triple> expect;
    for (const auto& t : a.to_triples()) {
      if (rs.matches(t.row) && cs.matches(t.col)) expect.push_back(t);
    }
    auto got = subref(a, rs, cs);
    check_invariants(got);
    CHECK(got.to_triples() == expect);
  }
}

TEST_CASE("transpose") {
  auto a = num3({"a", "a", "b"}, {"x", "y", "x"}, {1, 2, 3});
  auto t = transpose(a);
  CHECK(t.row_keys() == std::vector<std::string>{"x", "y"});
  CHECK(t.at("y", "a") == Value(2.0));
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 50; ++iter) {
    auto r = testutil::random_num(rng, 15, 12, 0.2);
    check_invariants(transpose(r));
    CHECK(transpose(transpose(r)) == r);
    for (const auto& tr : r.to_triples()) CHECK(transpose(r).at(tr.col, tr.row) == tr.value);
  }
}

TEST_CASE("element-wise examples") {
  auto a = num3({"a", "b"}, {"x", "y"}, {1, 2});
  auto b = num3({"a", "c"}, {"x", "z"}, {10, 5});
  auto sum = ew_add(a, b);
  CHECK(sum.nnz() == 3);
  CHECK(sum.at("a", "x") == Value(11.0));
  CHECK(sum.at("c", "z") == Value(5.0));
  auto prod = ew_mult(a, b);
  CHECK(prod.nnz() == 1);
  CHECK(prod.at("a", "x") == Value(10.0));
  CHECK(ew_add(a, b, BinaryOp::kMax).at("a", "x") == Value(10.0));
  CHECK(ew_mult(a, b, BinaryOp::kMin).at("a", "x") == Value(1.0));
  auto neg = num3({"a"}, {"x"}, {-1});
  CHECK(ew_add(a, neg).nnz() == 1);  // the cancelled cell is dropped
}

TEST_CASE("element-wise ops match dense oracles") {
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 100; ++iter) {
    auto a = testutil::random_num(rng, 10, 10, 0.3);
    auto b = testutil::random_num(rng, 10, 10, 0.3);
    Dense da = testutil::to_dense(a), db = testutil::to_dense(b), plus, times;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        auto r = testutil::key("r", i), c = testutil::key("c", j);
        const double x = testutil::lookup(da, r, c), y = testutil::lookup(db, r, c);
        if (x + y != 0) plus[r][c] = x + y;
        if (x * y != 0) times[r][c] = x * y;
      }
    }
    auto s = ew_add(a, b), p = ew_mult(a, b);
    check_invariants(s);
    check_invariants(p);
    CHECK(s.to_triples() == testutil::dense_triples(plus));
    CHECK(p.to_triples() == testutil::dense_triples(times));
    CHECK(ew_add(a, b) == ew_add(b, a));
    CHECK(ew_mult(a, b) == ew_mult(b, a));
  }
}

TEST_CASE("string arrays") {
  std::vector<std::string> r{"a", "b"}, c{"x", "x"};
  std::vector<Value> v1{std::string("m"), std::string("q")};
  std::vector<Value> v2{std::string("z")};
  std::vector<std::string> r2{"a"}, c2{"x"};
  auto a = assoc_from_triples(r, c, v1);
  auto b = assoc_from_triples(r2, c2, v2);
  CHECK(ew_add(a, b, BinaryOp::kMax).at("a", "x") == Value(std::string("z")));
  CHECK(ew_add(a, b, BinaryOp::kMin).at("a", "x") == Value(std::string("m")));
  CHECK(ew_mult(a, b, BinaryOp::kLast).at("a", "x") == Value(std::string("z")));
  CHECK(code_of([&] { ew_add(a, b); }) == ErrorCode::kKindMismatch);
  auto n = num3({"a"}, {"x"}, {1});
  CHECK(code_of([&] { ew_add(a, n, BinaryOp::kMax); }) == ErrorCode::kKindMismatch);
  auto l = logical(a);
  CHECK(l.is_num());
  CHECK(l.at("b", "x") == Value(1.0));
}

TEST_CASE("equality is structural") {
  auto a = num3({"a", "b"}, {"x", "y"}, {1, 2});
  auto b = num3({"b", "a"}, {"y", "x"}, {2, 1});
  CHECK(equal(a, b));
  CHECK_FALSE(equal(a, num3({"a"}, {"x"}, {1})));
  CHECK(assoc_from_triples(a.to_triples()) == a);
}
