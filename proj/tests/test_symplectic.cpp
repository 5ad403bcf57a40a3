#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qlego/errors.hpp"
#include "qlego/symplectic.hpp"

using namespace qlego;

TEST_CASE("pauli parsing, weight and commutation") {
  const auto p = PauliOp::from_string("XZYI");
  CHECK(p.weight() == 3);
  CHECK(p.to_string() == "XZYI");
  CHECK(p.x(2));
  CHECK(p.z(2));
  CHECK_FALSE(p.x(1));
  CHECK(commutes(PauliOp::from_string("XX"), PauliOp::from_string("ZZ")));
  CHECK_FALSE(commutes(PauliOp::from_string("XI"), PauliOp::from_string("ZI")));
  CHECK_THROWS_AS(PauliOp::from_string("XQ"), ContractViolation);
}

TEST_CASE("wide operators span several words") {
  std::string s(130, 'I');
  s[0] = 'X';
  s[64] = 'Z';
  s[129] = 'Y';
  const auto p = PauliOp::from_string(s);
  CHECK(p.weight() == 3);
  CHECK(p.to_string() == s);
  ParityCheckMatrix h(130);
  h.append_row(p);
  CHECK(h.row(0) == p);
  CHECK(rank(h) == 1);
}

TEST_CASE("rank and reduction keep the row space") {
  auto h = ParityCheckMatrix::from_strings({"XXI", "IXX", "XIX", "ZZZ"});
  CHECK(rank(h) == 3);
  const auto r = reduced(h);
  CHECK(r.num_rows() == 3);
  CHECK(row_space_equal(h, r));
  CHECK(oracle::group_strings(h) == oracle::closure(3, h.to_strings()));
}

TEST_CASE("gauss_eliminate reports pivots per requested column") {
  auto h = ParityCheckMatrix::from_strings({"ZZ", "XX"});
  const BitColumn cols[] = {{0, Part::X}, {1, Part::Z}, {0, Part::Z}};
  const auto e = gauss_eliminate(h, cols);
  REQUIRE(e.pivots.size() == 3);
  CHECK(e.pivots[0] == 0u);
  CHECK(e.pivots[1] == 1u);
  CHECK_FALSE(e.pivots[2].has_value());
  CHECK(row_space_equal(e.matrix, h));
}

TEST_CASE("tensor product places legs side by side") {
  auto h = tensor_product(ParityCheckMatrix::from_strings({"XX", "ZZ"}), ParityCheckMatrix::from_strings({"Z"}));
  CHECK(h.num_legs() == 3);
  CHECK(h.to_strings() == std::vector<std::string>{"XXI", "ZZI", "IIZ"});
}

TEST_CASE("self-trace of two repetition blocks") {
  // Z-spider of 3 legs traced with another on one leg gives a 4-leg spider.
  const auto z3 = ParityCheckMatrix::from_strings({"ZZI", "IZZ", "XXX"});
  const std::pair<std::size_t, std::size_t> p{2, 0};
  const auto h = trace(z3, z3, std::span(&p, 1));
  CHECK(row_space_equal(h, ParityCheckMatrix::from_strings({"ZZII", "IZZI", "IIZZ", "XXXX"})));
}

TEST_CASE("self-trace where a single pivot pass would be wrong") {
  const auto h = ParityCheckMatrix::from_strings({"XYX", "ZZI", "IIX"});
  const auto got = self_trace(h, 0, 1);
  const auto want = oracle::filter_trace(oracle::group_strings(h), {{0, 1}});
  CHECK(oracle::group_strings(got) == want);
}

TEST_CASE("self-trace matches the filter oracle on random isotropic PCMs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t legs = 3 + rng() % 6;
    const std::size_t rows = 1 + rng() % legs;
    const auto h = oracle::random_isotropic(legs, rows, rng);
    const std::size_t a = rng() % legs;
    std::size_t b = rng() % legs;
    while (b == a) b = rng() % legs;
    std::vector<std::pair<std::size_t, std::size_t>> pairs{{a, b}};
    if (legs >= 6 && rng() % 2) {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < legs; ++i) {
        if (i != a && i != b) rest.push_back(i);
      }
      pairs.emplace_back(rest[0], rest[1]);
    }
    const auto got = self_trace(h, pairs);
    CHECK(oracle::group_strings(got) == oracle::filter_trace(oracle::group_strings(h), pairs));
    CHECK(got.is_isotropic());
  }
}

TEST_CASE("self-trace also filters non-commuting generator sets") {
  // The pair rule is plain kernel computation, so isotropy is not needed.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t legs = 3 + rng() % 4;
    ParityCheckMatrix h(legs);
    for (std::size_t r = 0; r < 1 + rng() % 4; ++r) h.append_row(oracle::random_pauli(legs, rng));
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, legs - 1}};
    CHECK(oracle::group_strings(self_trace(h, pairs)) ==
          oracle::filter_trace(oracle::closure(legs, h.to_strings()), pairs));
  }
}

TEST_CASE("self-trace rejects bad leg pairs") {
  const auto h = ParityCheckMatrix::from_strings({"XXX"});
  CHECK_THROWS_AS(self_trace(h, 0, 0), ContractViolation);
  CHECK_THROWS_AS(self_trace(h, 0, 3), ContractViolation);
  const std::vector<std::pair<std::size_t, std::size_t>> twice{{0, 1}, {1, 2}};
  CHECK_THROWS_AS(self_trace(h, twice), ContractViolation);
}

TEST_CASE("restriction and stacked rank") {
  const auto h1 = ParityCheckMatrix::from_strings({"XXI", "ZZZ"});
  const auto h2 = ParityCheckMatrix::from_strings({"XI", "IZ"});
  const std::size_t l1[] = {2, 0};
  const std::size_t l2[] = {0, 1};
  const auto r = restrict_to(h1, l1);
  CHECK(r.to_strings() == std::vector<std::string>{"IX", "ZZ"});
  auto stack = r;
  for (const auto& row : restrict_to(h2, l2).rows()) stack.append_row(row);
  CHECK(stacked_rank(h1, l1, h2, l2) == rank(stack));
  CHECK(stacked_rank(h1, l1, h2, l2) == 4);
}

TEST_CASE("group walks visit every element once") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = oracle::random_isotropic(6, 1 + rng() % 6, rng);
    std::set<std::vector<std::uint64_t>> seen;
    std::size_t count = 0;
    walk_group_words(reduced(h), [&](std::span<const std::uint64_t> w) {
      seen.insert({w.begin(), w.end()});
      ++count;
    });
    CHECK(count == (std::size_t{1} << rank(h)));
    CHECK(seen.size() == count);
    CHECK(enumerate_group(h).size() == count);
  }
}

TEST_CASE("enumeration honours its rank cap") {
  ParityCheckMatrix h(4);
  for (const char* s : {"ZZII", "IZZI", "IIZZ"}) h.append_row(PauliOp::from_string(s));
  CHECK_THROWS_AS(enumerate_group(h, EnumerationLimit{2}), ResourceLimitError);
}
