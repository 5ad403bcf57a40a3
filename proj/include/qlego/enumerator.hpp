#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlego/network.hpp"
#include "qlego/polynomial.hpp"
#include "qlego/symplectic.hpp"
#include "qlego/tree.hpp"

namespace qlego {

/// Pauli operator on a tensor's open legs, two bits per leg (I=0, X=1,
/// Z=2, Y=3), 32 legs per word. Keys order by their word sequence.
using PauliKey = std::vector<std::uint64_t>;

std::size_t key_words(std::size_t legs);
PauliKey make_key(std::size_t legs);
unsigned key_symbol(std::span<const std::uint64_t> key, std::size_t leg);
void set_key_symbol(std::span<std::uint64_t> key, std::size_t leg, unsigned symbol);
std::string key_string(std::span<const std::uint64_t> key, std::size_t legs);

/// Sparse tensor weight enumerator. Entry i maps the Pauli key(i) on the
/// open legs to poly(i), a polynomial counting weight on the closed legs.
/// Keys are stored flat, sorted ascending and unique; polynomials are
/// never zero. `pcm` covers the open legs (first, in the same order)
/// followed by `closed_leg_count` closed legs.
struct TensorWEP {
  std::vector<LegRef> open_legs;
  std::vector<std::uint64_t> keys;  // nnz() * stride() words
  std::vector<WeightPolynomial> polys;
  ParityCheckMatrix pcm;
  std::size_t closed_leg_count = 0;

  std::size_t stride() const { return key_words(open_legs.size()); }
  std::size_t nnz() const { return polys.size(); }
  std::span<const std::uint64_t> key(std::size_t i) const { return {keys.data() + i * stride(), stride()}; }
  const WeightPolynomial& poly(std::size_t i) const { return polys[i]; }
  /// Polynomial of the entry with the given key, zero if absent.
  WeightPolynomial at(std::span<const std::uint64_t> key) const;
  /// Scalar value of a tensor without open legs.
  WeightPolynomial scalar() const;
};

WeightPolynomial brute_force_wep(const ParityCheckMatrix& h, EnumerationLimit limit = {});

/// Tensor WEP of row(h) with the listed legs open; open legs are labelled
/// {node, leg index in h}.
TensorWEP brute_force_tensor_wep(const ParityCheckMatrix& h, std::span<const std::size_t> open_legs, int node = 0,
                                 EnumerationLimit limit = {});

TensorWEP wep_product(const TensorWEP& t1, const TensorWEP& t2);

struct TraceResult {
  TensorWEP tensor;
  std::uint64_t multiplications = 0;
};

/// Joins open legs of t1 to open legs of t2 (pairs of leg identities).
/// Result open legs: t1's remaining, then t2's. `multiplications` is the
/// number of matching key pairs, one polynomial product each.
TraceResult wep_trace(const TensorWEP& t1, const TensorWEP& t2, std::span<const std::pair<LegRef, LegRef>> pairs);

/// Sums entries whose keys agree on legs a and b and drops both legs.
/// `multiplications` counts the accumulations performed.
TraceResult wep_self_trace(const TensorWEP& t, LegRef a, LegRef b);

/// 2^rank(restrict(h, legs)): the entry count of the tensor WEP with those
/// legs open.
BigInt nnz_count(const ParityCheckMatrix& h, std::span<const std::size_t> legs);

struct DensityRecord {
  std::size_t step = 0;  // merge index; leaves of single-node trees use 0
  std::size_t open_leg_count = 0;
  std::uint64_t nnz = 0;
  /// nnz / 4^open_leg_count
  double density() const;
  std::string ratio() const;
};

struct ContractionResult {
  WeightPolynomial A;
  BigInt true_cost = 0;
  /// Polynomial multiplications per merge, in merge order.
  std::vector<std::uint64_t> merge_costs;
  std::vector<DensityRecord> density;
  /// Count of matching identity assignments the raw fold over-counts by;
  /// A is the raw scalar divided by it.
  BigInt redundancy = 1;
};

/// Contracts the network along the tree. Leaves are brute-forced with
/// their edge legs open and weight counted on their dangling legs.
ContractionResult contract_network(const TensorNetwork& net, const ContractionTree& tree,
                                   EnumerationLimit leaf_limit = {});

/// Sum_w P_w (1-z)^w (1+3z)^(n-w) / 2^shift, exact.
WeightPolynomial macwilliams_transform(const WeightPolynomial& p, std::size_t n, std::size_t shift);
/// Normalizer enumerator B of an [[n,k]] code from its stabilizer enumerator.
WeightPolynomial macwilliams_B(const WeightPolynomial& a, std::size_t n, std::size_t k);
/// Inverse transform, A from B.
WeightPolynomial macwilliams_A(const WeightPolynomial& b, std::size_t n, std::size_t k);

/// Smallest w with B_w > A_w. Throws InvalidInputError when A == B (a
/// stabilizer state) or B_w < A_w somewhere.
std::size_t distance(const WeightPolynomial& a, const WeightPolynomial& b);

}  // namespace qlego
