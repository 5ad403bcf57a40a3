#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qlego/enumerator.hpp"
#include "qlego/errors.hpp"

using namespace qlego;

namespace {

WeightPolynomial poly(std::initializer_list<std::pair<const std::size_t, BigInt>> terms) {
  return WeightPolynomial::from_terms(std::map<std::size_t, BigInt>(terms));
}

WeightPolynomial from_hist(const std::vector<std::uint64_t>& h) {
  WeightPolynomial p;
  for (std::size_t w = 0; w < h.size(); ++w) p.add_monomial(w, h[w]);
  return p;
}

CodeSpec data_code(const std::string& file) { return ingest_code_file(std::string(QLEGO_DATA_DIR) + "/" + file); }

const ParityCheckMatrix kBell = ParityCheckMatrix::from_strings({"XX", "ZZ"});

}  // namespace

TEST_CASE("polynomial arithmetic and formatting") {
  const auto p = poly({{0, 1}, {2, 3}});
  CHECK((p * p) == poly({{0, 1}, {2, 6}, {4, 9}}));
  CHECK((p + p).to_string() == "2 + 6z^2");
  CHECK(WeightPolynomial{}.to_string() == "0");
  CHECK(poly({{1, 1}}).to_string() == "z");
  CHECK(p.sum() == 4);
  CHECK((p + p).divided_exactly(2) == p);
  CHECK_THROWS_AS(p.divided_exactly(2), InvalidInputError);
}

TEST_CASE("polynomials switch to arbitrary precision on overflow") {
  const BigInt big = BigInt(1) << 63;
  auto p = poly({{0, big}, {1, 1}});
  CHECK_FALSE(p.is_wide());
  const auto sq = p * p;
  CHECK(sq.is_wide());
  CHECK(sq[0] == big * big);
  CHECK(sq[1] == 2 * big);
  auto q = p;
  q.add(p);
  CHECK(q.is_wide());
  CHECK(q == poly({{0, 2 * big}, {1, 2}}));
  const auto w = poly({{0, big * big}, {1, 2 * big}});
  CHECK(w.divided_exactly(big) == poly({{0, big}, {1, 2}}));
  CHECK_FALSE(w.divided_exactly(big).is_wide());
}

TEST_CASE("scalar enumerators of small codes") {
  CHECK(brute_force_wep(ParityCheckMatrix::from_strings({"XXXX", "ZZZZ"})) == poly({{0, 1}, {4, 3}}));
  CHECK(brute_force_wep(kBell) == poly({{0, 1}, {2, 3}}));
  CHECK(brute_force_wep(data_code("code513.pcm").pcm) == poly({{0, 1}, {4, 15}}));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const auto h = oracle::random_isotropic(7, 1 + rng() % 7, rng);
    std::vector<std::size_t> all{0, 1, 2, 3, 4, 5, 6};
    CHECK(brute_force_wep(h) == from_hist(oracle::weight_histogram(oracle::group_strings(h), all)));
  }
}

TEST_CASE("tensor enumerators") {
  const std::size_t leg1[] = {1};
  const auto t = brute_force_tensor_wep(kBell, leg1);
  REQUIRE(t.nnz() == 4);
  for (unsigned s = 0; s < 4; ++s) {
    PauliKey k = make_key(1);
    set_key_symbol(k, 0, s);
    CHECK(t.at(k) == (s == 0 ? poly({{0, 1}}) : poly({{1, 1}})));
  }
  const auto scalar = brute_force_tensor_wep(kBell, {});
  CHECK(scalar.scalar() == brute_force_wep(kBell));
  const std::size_t both[] = {0, 1};
  const auto full = brute_force_tensor_wep(kBell, both);
  for (std::size_t i = 0; i < full.nnz(); ++i) CHECK(full.poly(i) == poly({{0, 1}}));
}

TEST_CASE("tensor enumerators against explicit group filtering") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + rng() % 5;
    const auto h = oracle::random_isotropic(n, 1 + rng() % n, rng);
    std::vector<std::size_t> open, closed;
    for (std::size_t i = 0; i < n; ++i) (rng() % 2 ? open : closed).push_back(i);
    const auto tw = brute_force_tensor_wep(h, open);
    std::map<std::string, std::vector<std::uint64_t>> want;
    for (const auto& s : oracle::group_strings(h)) {
      std::string key;
      for (std::size_t i : open) key += s[i];
      auto& hist = want[key];
      std::size_t w = 0;
      for (std::size_t i : closed) w += s[i] != 'I';
      if (hist.size() <= w) hist.resize(w + 1, 0);
      ++hist[w];
    }
    REQUIRE(tw.nnz() == want.size());
    for (std::size_t i = 0; i < tw.nnz(); ++i) {
      CHECK(tw.poly(i) == from_hist(want.at(key_string(tw.key(i), open.size()))));
    }
    CHECK(BigInt(tw.nnz()) == nnz_count(h, open));
  }
}

TEST_CASE("nnz identity on random instances") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 11;
    const auto h = oracle::random_isotropic(n, 1 + rng() % n, rng);
    std::vector<std::size_t> j;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 2) j.push_back(i);
    }
    CHECK(BigInt(brute_force_tensor_wep(h, j).nnz()) == nnz_count(h, j));
  }
  CHECK(nnz_count(kBell, {}) == 1);
}

TEST_CASE("product of tensor enumerators") {
  const std::size_t leg1[] = {1};
  const auto a = brute_force_tensor_wep(kBell, leg1, 0);
  const auto b = brute_force_tensor_wep(kBell, leg1, 1);
  const auto ab = wep_product(a, b);
  CHECK(ab.nnz() == 16);
  CHECK(ab.pcm.num_legs() == 4);
  CHECK(BigInt(ab.nnz()) == BigInt(1) << rank(restrict_to(ab.pcm, std::vector<std::size_t>{0, 1})));
  const auto s = brute_force_tensor_wep(kBell, {}, 0);
  CHECK(wep_product(s, brute_force_tensor_wep(kBell, {}, 1)).scalar() == poly({{0, 1}, {2, 6}, {4, 9}}));
  CHECK_THROWS_AS(wep_product(a, a), ContractViolation);
  TensorWEP empty;
  empty.pcm = ParityCheckMatrix(0);
  CHECK(wep_product(a, empty).nnz() == 0);
}

TEST_CASE("tracing two Bell tensors") {
  const std::size_t leg1[] = {1};
  const auto a = brute_force_tensor_wep(kBell, leg1, 0);
  const auto b = brute_force_tensor_wep(kBell, leg1, 1);
  const std::pair<LegRef, LegRef> p{{0, 1}, {1, 1}};
  const auto r = wep_trace(a, b, std::span(&p, 1));
  CHECK(r.multiplications == 4);
  CHECK(r.tensor.scalar() == poly({{0, 1}, {2, 3}}));
  const std::pair<LegRef, LegRef> bad{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(wep_trace(a, b, std::span(&bad, 1)), ContractViolation);
}

TEST_CASE("tracing with an identity stopper filters") {
  const std::size_t open[] = {0, 1};
  const auto t = brute_force_tensor_wep(ParityCheckMatrix::from_strings({"XXX", "ZZI"}), open, 0);
  const std::size_t stop_leg[] = {0};
  const auto stop = brute_force_tensor_wep(ParityCheckMatrix(1), stop_leg, 1);
  const std::pair<LegRef, LegRef> p{{0, 1}, {1, 0}};
  const auto r = wep_trace(t, stop, std::span(&p, 1));
  std::size_t with_identity = 0;
  for (std::size_t i = 0; i < t.nnz(); ++i) with_identity += key_symbol(t.key(i), 1) == 0;
  CHECK(r.multiplications == with_identity);
  CHECK(r.tensor.nnz() == with_identity);
}

TEST_CASE("wep_trace matches the traced PCM up to the redundancy factor") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 120; ++t) {
    const std::size_t n1 = 2 + rng() % 4, n2 = 2 + rng() % 4;
    const auto h1 = oracle::random_isotropic(n1, 1 + rng() % n1, rng);
    const auto h2 = oracle::random_isotropic(n2, 1 + rng() % n2, rng);
    std::vector<std::size_t> o1, o2;
    for (std::size_t i = 0; i < n1; ++i) if (i == 0 || rng() % 2) o1.push_back(i);
    for (std::size_t i = 0; i < n2; ++i) if (i == 0 || rng() % 2) o2.push_back(i);
    const auto t1 = brute_force_tensor_wep(h1, o1, 0);
    const auto t2 = brute_force_tensor_wep(h2, o2, 1);
    std::vector<std::pair<LegRef, LegRef>> pairs{{{0, o1[0]}, {1, o2[0]}}};
    if (o1.size() > 1 && o2.size() > 1 && rng() % 2) pairs.push_back({{0, o1[1]}, {1, o2[1]}});
    const auto r = wep_trace(t1, t2, pairs);

    // Multiplications: count matching entry pairs directly.
    std::uint64_t matches = 0;
    for (std::size_t a = 0; a < t1.nnz(); ++a) {
      for (std::size_t b = 0; b < t2.nnz(); ++b) {
        bool ok = true;
        for (std::size_t i = 0; i < pairs.size(); ++i) ok = ok && key_symbol(t1.key(a), i) == key_symbol(t2.key(b), i);
        matches += ok;
      }
    }
    CHECK(r.multiplications == matches);

    // The traced PCM with the same open legs, brute-forced.
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < r.tensor.open_legs.size(); ++i) open.push_back(i);
    const auto direct = brute_force_tensor_wep(r.tensor.pcm, open);
    PauliKey zero = make_key(open.size());
    const BigInt k = r.tensor.at(zero)[0];
    REQUIRE(k > 0);
    REQUIRE(r.tensor.nnz() == direct.nnz());
    for (std::size_t i = 0; i < direct.nnz(); ++i) {
      CHECK(key_string(r.tensor.key(i), open.size()) == key_string(direct.key(i), open.size()));
      CHECK(r.tensor.poly(i) == direct.poly(i) * WeightPolynomial::constant(k));
    }
    CHECK(BigInt(r.tensor.nnz()) == nnz_count(r.tensor.pcm, open));
  }
}

TEST_CASE("self-trace of tensor enumerators") {
  const std::size_t both[] = {0, 1};
  const auto t = brute_force_tensor_wep(kBell, both, 0);
  const auto r = wep_self_trace(t, {0, 0}, {0, 1});
  CHECK(r.tensor.scalar() == poly({{0, 4}}));
  CHECK(r.multiplications == 4);
  auto mismatch = brute_force_tensor_wep(ParityCheckMatrix::from_strings({"XZ"}), both, 0);
  CHECK(wep_self_trace(mismatch, {0, 0}, {0, 1}).tensor.scalar() == poly({{0, 1}}));
  // keep only XZ
  mismatch.keys.erase(mismatch.keys.begin(), mismatch.keys.begin() + static_cast<std::ptrdiff_t>(mismatch.stride()));
  mismatch.polys.erase(mismatch.polys.begin());
  const auto none = wep_self_trace(mismatch, {0, 0}, {0, 1});
  CHECK(none.tensor.nnz() == 0);
  CHECK(none.tensor.scalar().is_zero());
}

TEST_CASE("self-trace commutes with products on disjoint legs") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const auto h1 = oracle::random_isotropic(4, 1 + rng() % 4, rng);
    const auto h2 = oracle::random_isotropic(3, 1 + rng() % 3, rng);
    const std::size_t o1[] = {0, 1, 3};
    const std::size_t o2[] = {0, 2};
    const auto t1 = brute_force_tensor_wep(h1, o1, 0);
    const auto t2 = brute_force_tensor_wep(h2, o2, 1);
    const auto a = wep_self_trace(wep_product(t1, t2), {0, 0}, {0, 3}).tensor;
    const auto b = wep_product(wep_self_trace(t1, {0, 0}, {0, 3}).tensor, t2);
    CHECK(a.open_legs == b.open_legs);
    CHECK(a.keys == b.keys);
    CHECK(a.polys == b.polys);
  }
}

TEST_CASE("MacWilliams transform of known codes") {
  const auto a422 = poly({{0, 1}, {4, 3}});
  const auto b422 = macwilliams_B(a422, 4, 2);
  CHECK(b422 == poly({{0, 1}, {2, 18}, {3, 24}, {4, 21}}));
  CHECK(distance(a422, b422) == 2);
  CHECK(macwilliams_B(poly({{0, 1}}), 1, 1) == poly({{0, 1}, {1, 3}}));
  const auto a513 = poly({{0, 1}, {4, 15}});
  const auto b513 = macwilliams_B(a513, 5, 1);
  CHECK(b513 == poly({{0, 1}, {3, 30}, {4, 15}, {5, 18}}));
  CHECK(distance(a513, b513) == 3);
  CHECK_THROWS_AS(distance(a513, a513), InvalidInputError);
  CHECK_THROWS_AS(macwilliams_B(poly({{0, 1}, {1, 1}}), 4, 1), InvalidInputError);
}

TEST_CASE("MacWilliams agrees with normalizer enumeration and inverts") {
  for (const char* file : {"code422.pcm", "code513.pcm", "steane7.pcm", "shor9.pcm", "rsc3.pcm"}) {
    INFO(file);
    const auto code = data_code(file);
    const auto a = brute_force_wep(code.pcm);
    const auto b = macwilliams_B(a, code.n, code.k);
    CHECK(b == from_hist(oracle::normalizer_histogram(code.pcm)));
    CHECK(macwilliams_A(b, code.n, code.k) == a);
    CHECK(a[0] == 1);
    CHECK(a.sum() == BigInt(1) << (code.n - code.k));
    CHECK(b.sum() == BigInt(1) << (code.n + code.k));
    for (std::size_t w = 0; w <= code.n; ++w) CHECK(b[w] >= a[w]);
    CHECK(distance(a, b) == (std::string(file) == "code422.pcm" ? 2u : 3u));
  }
}

TEST_CASE("contracting layouts reproduces brute force") {
  std::mt19937_64 rng(12);
  const auto steane = data_code("steane7.pcm");
  const auto c422 = data_code("code422.pcm");
  const std::vector<std::pair<const char*, TensorNetwork>> nets{
      {"concat(3,2)", layout_concat_rep(3, 2)}, {"rsc(3,3)", layout_rsc(3, 3)},
      {"happy(0)", layout_happy(0)},            {"msp(422)", layout_msp(c422)},
      {"tanner(steane)", layout_tanner(steane)}, {"msp(steane)", absorb_stoppers(layout_msp(steane))}};
  for (const auto& [name, net] : nets) {
    INFO(std::string(name));
    const auto want = brute_force_wep(network_pcm(net));
    for (int t = 0; t < 5; ++t) {
      const auto tree = oracle::random_edge_tree(net, rng);
      const auto r = contract_network(net, tree);
      CHECK(r.A == want);
      CHECK(r.density.size() == std::max<std::size_t>(1, net.size() - 1));
      for (const auto& d : r.density) {
        CHECK(d.density() > 0);
        CHECK(d.density() <= 1);
      }
      BigInt sum = 0;
      for (auto c : r.merge_costs) sum += c;
      CHECK(sum == r.true_cost);
    }
  }
}

TEST_CASE("single-node contraction") {
  TensorNetwork net;
  net.add_node(make_lego(LegoKind::Enc603));
  const auto r = contract_network(net, ContractionTree::single(0));
  CHECK(r.A == brute_force_wep(make_lego(LegoKind::Enc603).pcm));
  CHECK(r.true_cost == 0);
  REQUIRE(r.density.size() == 1);
  CHECK(r.density[0].density() == 1.0);
}

TEST_CASE("contraction rejects mismatched trees") {
  const auto net = layout_rsc(2, 2);
  ContractionTree t;
  t.add_merge(t.add_leaf(0), t.add_leaf(1));
  CHECK_THROWS_AS(contract_network(net, t), ContractViolation);
  ContractionTree bad;
  const int a = bad.add_merge(bad.add_leaf(0), bad.add_leaf(3));  // diagonal, no shared edge
  const int b = bad.add_merge(a, bad.add_leaf(1));
  bad.add_merge(b, bad.add_leaf(2));
  const auto fused = absorb_stoppers(net);
  CHECK_THROWS_AS(contract_network(fused, bad), ContractViolation);
}
