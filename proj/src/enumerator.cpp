#include "qlego/enumerator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "qlego/errors.hpp"

namespace qlego {

namespace {

constexpr std::size_t kLegsPerWord = 32;

unsigned symbol_at(std::span<const std::uint64_t> xz, std::size_t words, std::size_t leg) {
  const std::uint64_t m = std::uint64_t{1} << (leg % 64);
  return ((xz[leg / 64] & m) ? 1u : 0u) | ((xz[words + leg / 64] & m) ? 2u : 0u);
}

bool key_less(const std::uint64_t* a, const std::uint64_t* b, std::size_t stride) {
  return std::lexicographical_compare(a, a + stride, b, b + stride);
}

bool key_equal(const std::uint64_t* a, const std::uint64_t* b, std::size_t stride) {
  return std::equal(a, a + stride, b);
}

// Copies the symbols at `positions` of src into dst (zeroed by the caller).
void pick(const std::uint64_t* src, std::span<const std::size_t> positions, std::uint64_t* dst) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t p = positions[i];
    const std::uint64_t sym = (src[p / kLegsPerWord] >> (2 * (p % kLegsPerWord))) & 3u;
    dst[i / kLegsPerWord] |= sym << (2 * (i % kLegsPerWord));
  }
}

// dst = a (la legs) followed by b (lb legs); dst has key_words(la + lb).
void concat(const std::uint64_t* a, std::size_t la, const std::uint64_t* b, std::size_t lb, std::uint64_t* dst) {
  const std::size_t wa = key_words(la), wb = key_words(lb), wd = key_words(la + lb);
  std::fill(dst, dst + wd, 0);
  std::copy(a, a + wa, dst);
  const std::size_t shift = 2 * (la % kLegsPerWord);
  const std::size_t base = la / kLegsPerWord;
  for (std::size_t w = 0; w < wb; ++w) {
    dst[base + w] |= b[w] << shift;
    if (shift != 0 && base + w + 1 < wd) dst[base + w + 1] |= b[w] >> (64 - shift);
  }
}

std::size_t position_of(const std::vector<LegRef>& legs, LegRef leg) {
  const auto it = std::find(legs.begin(), legs.end(), leg);
  if (it == legs.end()) {
    throw ContractViolation("leg (" + std::to_string(leg.node) + "," + std::to_string(leg.leg) +
                            ") is not an open leg of the tensor");
  }
  return static_cast<std::size_t>(it - legs.begin());
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& taken) {
  std::vector<bool> used(n, false);
  for (std::size_t p : taken) used[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

// Open-addressing map from flat keys to accumulated polynomials. Emits the
// entries sorted by key.
class Accumulator {
 public:
  explicit Accumulator(std::size_t stride) : stride_(stride), slots_(16, 0) {}

  WeightPolynomial& slot(const std::uint64_t* key) {
    if (2 * (polys_.size() + 1) > slots_.size()) grow();
    std::size_t i = hash(key) & (slots_.size() - 1);
    while (slots_[i] != 0) {
      const std::size_t idx = slots_[i] - 1;
      if (key_equal(keys_.data() + idx * stride_, key, stride_)) return polys_[idx];
      i = (i + 1) & (slots_.size() - 1);
    }
    slots_[i] = static_cast<std::uint32_t>(polys_.size() + 1);
    keys_.insert(keys_.end(), key, key + stride_);
    return polys_.emplace_back();
  }

  void emit(TensorWEP& t) {
    std::vector<std::uint32_t> order;
    order.reserve(polys_.size());
    for (std::uint32_t i = 0; i < polys_.size(); ++i) {
      if (!polys_[i].is_zero()) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return key_less(keys_.data() + a * stride_, keys_.data() + b * stride_, stride_);
    });
    t.keys.clear();
    t.keys.reserve(order.size() * stride_);
    t.polys.clear();
    t.polys.reserve(order.size());
    for (std::uint32_t i : order) {
      t.keys.insert(t.keys.end(), keys_.begin() + i * stride_, keys_.begin() + (i + 1) * stride_);
      t.polys.push_back(std::move(polys_[i]));
    }
  }

 private:
  std::size_t hash(const std::uint64_t* key) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t w = 0; w < stride_; ++w) {
      h ^= key[w];
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }

  void grow() {
    std::vector<std::uint32_t> next(slots_.size() * 2, 0);
    for (std::size_t idx = 0; idx < polys_.size(); ++idx) {
      std::size_t i = hash(keys_.data() + idx * stride_) & (next.size() - 1);
      while (next[i] != 0) i = (i + 1) & (next.size() - 1);
      next[i] = static_cast<std::uint32_t>(idx + 1);
    }
    slots_ = std::move(next);
  }

  std::size_t stride_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint64_t> keys_;
  std::vector<WeightPolynomial> polys_;
};

// PCM of a joined tensor: the traced result lists t1's open, t1's closed,
// t2's open, t2's closed legs; reorder to open legs first.
ParityCheckMatrix open_first(const ParityCheckMatrix& h, std::size_t open1, std::size_t closed1, std::size_t open2,
                             std::size_t closed2) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < open1; ++i) order.push_back(i);
  for (std::size_t i = 0; i < open2; ++i) order.push_back(open1 + closed1 + i);
  for (std::size_t i = 0; i < closed1; ++i) order.push_back(open1 + i);
  for (std::size_t i = 0; i < closed2; ++i) order.push_back(open1 + closed1 + open2 + i);
  return restrict_to(h, order);
}

void check_shape(const TensorWEP& t) {
  if (t.pcm.num_legs() != t.open_legs.size() + t.closed_leg_count) {
    throw ContractViolation("tensor PCM has " + std::to_string(t.pcm.num_legs()) + " legs, expected " +
                            std::to_string(t.open_legs.size() + t.closed_leg_count));
  }
  if (t.keys.size() != t.nnz() * t.stride()) throw ContractViolation("tensor key storage does not match its entries");
}

}  // namespace

std::size_t key_words(std::size_t legs) { return (legs + kLegsPerWord - 1) / kLegsPerWord; }

PauliKey make_key(std::size_t legs) { return PauliKey(key_words(legs), 0); }

unsigned key_symbol(std::span<const std::uint64_t> key, std::size_t leg) {
  return static_cast<unsigned>((key[leg / kLegsPerWord] >> (2 * (leg % kLegsPerWord))) & 3u);
}

void set_key_symbol(std::span<std::uint64_t> key, std::size_t leg, unsigned symbol) {
  const std::size_t shift = 2 * (leg % kLegsPerWord);
  auto& w = key[leg / kLegsPerWord];
  w = (w & ~(std::uint64_t{3} << shift)) | (std::uint64_t{symbol & 3u} << shift);
}

std::string key_string(std::span<const std::uint64_t> key, std::size_t legs) {
  std::string s(legs, 'I');
  for (std::size_t i = 0; i < legs; ++i) s[i] = "IXZY"[key_symbol(key, i)];
  return s;
}

WeightPolynomial TensorWEP::at(std::span<const std::uint64_t> k) const {
  const std::size_t w = stride();
  if (k.size() != w) throw ContractViolation("key width does not match the tensor");
  std::size_t lo = 0, hi = nnz();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (key_less(keys.data() + mid * w, k.data(), w)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == nnz() || !key_equal(keys.data() + lo * w, k.data(), w)) return {};
  return polys[lo];
}

WeightPolynomial TensorWEP::scalar() const {
  if (!open_legs.empty()) throw ContractViolation("tensor still has open legs");
  return polys.empty() ? WeightPolynomial{} : polys.front();
}

WeightPolynomial brute_force_wep(const ParityCheckMatrix& h, EnumerationLimit limit) {
  const ParityCheckMatrix basis = reduced(h);
  const std::size_t words = basis.words();
  std::vector<std::uint64_t> hist(h.num_legs() + 1, 0);
  walk_group_words(
      basis,
      [&](std::span<const std::uint64_t> xz) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < words; ++i) w += std::popcount(xz[i] | xz[words + i]);
        ++hist[w];
      },
      limit);
  WeightPolynomial p;
  for (std::size_t w = 0; w < hist.size(); ++w) p.add_monomial(w, hist[w]);
  return p;
}

TensorWEP brute_force_tensor_wep(const ParityCheckMatrix& h, std::span<const std::size_t> open_legs, int node,
                                 EnumerationLimit limit) {
  std::vector<bool> is_open(h.num_legs(), false);
  for (std::size_t leg : open_legs) {
    if (leg >= h.num_legs()) throw ContractViolation("open leg " + std::to_string(leg) + " out of range");
    if (is_open[leg]) throw ContractViolation("open leg " + std::to_string(leg) + " listed twice");
    is_open[leg] = true;
  }
  std::vector<std::size_t> closed;
  for (std::size_t i = 0; i < h.num_legs(); ++i) {
    if (!is_open[i]) closed.push_back(i);
  }
  const ParityCheckMatrix basis = reduced(h);
  const std::size_t words = basis.words();
  std::vector<std::uint64_t> closed_mask(words, 0);
  for (std::size_t leg : closed) closed_mask[leg / 64] |= std::uint64_t{1} << (leg % 64);

  TensorWEP t;
  for (std::size_t leg : open_legs) t.open_legs.push_back({node, leg});
  const std::size_t stride = t.stride();
  Accumulator acc(stride);
  PauliKey key(stride);
  walk_group_words(
      basis,
      [&](std::span<const std::uint64_t> xz) {
        std::fill(key.begin(), key.end(), 0);
        for (std::size_t i = 0; i < open_legs.size(); ++i) set_key_symbol(key, i, symbol_at(xz, words, open_legs[i]));
        std::size_t w = 0;
        for (std::size_t i = 0; i < words; ++i) w += std::popcount((xz[i] | xz[words + i]) & closed_mask[i]);
        acc.slot(key.data()).add_monomial(w);
      },
      limit);
  acc.emit(t);
  std::vector<std::size_t> order(open_legs.begin(), open_legs.end());
  order.insert(order.end(), closed.begin(), closed.end());
  t.pcm = restrict_to(basis, order);
  t.closed_leg_count = closed.size();
  return t;
}

TensorWEP wep_product(const TensorWEP& t1, const TensorWEP& t2) {
  check_shape(t1);
  check_shape(t2);
  for (const LegRef& l : t1.open_legs) {
    if (std::find(t2.open_legs.begin(), t2.open_legs.end(), l) != t2.open_legs.end()) {
      throw ContractViolation("tensor product of tensors sharing leg (" + std::to_string(l.node) + "," +
                              std::to_string(l.leg) + ")");
    }
  }
  const std::size_t m1 = t1.open_legs.size();
  const std::size_t m2 = t2.open_legs.size();
  TensorWEP out;
  out.open_legs = t1.open_legs;
  out.open_legs.insert(out.open_legs.end(), t2.open_legs.begin(), t2.open_legs.end());
  Accumulator acc(out.stride());
  PauliKey key(out.stride());
  for (std::size_t i = 0; i < t1.nnz(); ++i) {
    for (std::size_t j = 0; j < t2.nnz(); ++j) {
      concat(t1.key(i).data(), m1, t2.key(j).data(), m2, key.data());
      acc.slot(key.data()).add_product(t1.poly(i), t2.poly(j));
    }
  }
  acc.emit(out);
  out.pcm = open_first(tensor_product(t1.pcm, t2.pcm), m1, t1.closed_leg_count, m2, t2.closed_leg_count);
  out.closed_leg_count = t1.closed_leg_count + t2.closed_leg_count;
  return out;
}

TraceResult wep_trace(const TensorWEP& t1, const TensorWEP& t2, std::span<const std::pair<LegRef, LegRef>> pairs) {
  check_shape(t1);
  check_shape(t2);
  if (pairs.empty()) throw ContractViolation("wep_trace needs at least one leg pair");
  std::vector<std::size_t> p1, p2;
  for (const auto& [a, b] : pairs) {
    p1.push_back(position_of(t1.open_legs, a));
    p2.push_back(position_of(t2.open_legs, b));
  }
  for (const auto* p : {&p1, &p2}) {
    auto s = *p;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ContractViolation("leg traced twice in wep_trace");
  }
  const auto r1 = complement(t1.open_legs.size(), p1);
  const auto r2 = complement(t2.open_legs.size(), p2);

  // Join and remainder keys of every entry, stored flat.
  struct Side {
    std::size_t join_stride, rest_stride;
    std::vector<std::uint64_t> join, rest;
    const std::uint64_t* join_key(std::size_t i) const { return join.data() + i * join_stride; }
    const std::uint64_t* rest_key(std::size_t i) const { return rest.data() + i * rest_stride; }
  };
  auto prepare = [&](const TensorWEP& t, const std::vector<std::size_t>& jp, const std::vector<std::size_t>& rp) {
    Side s{key_words(jp.size()), key_words(rp.size()), {}, {}};
    s.join.assign(t.nnz() * s.join_stride, 0);
    s.rest.assign(t.nnz() * s.rest_stride, 0);
    for (std::size_t i = 0; i < t.nnz(); ++i) {
      pick(t.key(i).data(), jp, s.join.data() + i * s.join_stride);
      pick(t.key(i).data(), rp, s.rest.data() + i * s.rest_stride);
    }
    return s;
  };
  const Side s1 = prepare(t1, p1, r1);
  const Side s2 = prepare(t2, p2, r2);

  // Sort the larger side by join key and probe it with the smaller one.
  const bool left_small = t1.nnz() <= t2.nnz();
  const Side& small = left_small ? s1 : s2;
  const Side& big = left_small ? s2 : s1;
  const std::size_t n_small = left_small ? t1.nnz() : t2.nnz();
  const std::size_t n_big = left_small ? t2.nnz() : t1.nnz();
  const std::size_t jw = small.join_stride;
  std::vector<std::uint32_t> sorted(n_big);
  std::iota(sorted.begin(), sorted.end(), 0u);
  std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
    return key_less(big.join_key(a), big.join_key(b), jw);
  });

  TraceResult res;
  for (std::size_t i : r1) res.tensor.open_legs.push_back(t1.open_legs[i]);
  for (std::size_t i : r2) res.tensor.open_legs.push_back(t2.open_legs[i]);
  Accumulator acc(res.tensor.stride());
  PauliKey key(res.tensor.stride());
  for (std::size_t i = 0; i < n_small; ++i) {
    const std::uint64_t* jk = small.join_key(i);
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), jk,
                               [&](std::uint32_t e, const std::uint64_t* k) { return key_less(big.join_key(e), k, jw); });
    for (; lo != sorted.end() && key_equal(big.join_key(*lo), jk, jw); ++lo) {
      const std::size_t a = left_small ? i : *lo;
      const std::size_t b = left_small ? *lo : i;
      concat(s1.rest_key(a), r1.size(), s2.rest_key(b), r2.size(), key.data());
      acc.slot(key.data()).add_product(t1.poly(a), t2.poly(b));
      ++res.multiplications;
    }
  }
  acc.emit(res.tensor);

  std::vector<std::pair<std::size_t, std::size_t>> pcm_pairs;
  for (std::size_t i = 0; i < p1.size(); ++i) pcm_pairs.emplace_back(p1[i], p2[i]);
  res.tensor.pcm = open_first(trace(t1.pcm, t2.pcm, pcm_pairs), r1.size(), t1.closed_leg_count, r2.size(),
                              t2.closed_leg_count);
  res.tensor.closed_leg_count = t1.closed_leg_count + t2.closed_leg_count;
  return res;
}

TraceResult wep_self_trace(const TensorWEP& t, LegRef a, LegRef b) {
  check_shape(t);
  const std::size_t pa = position_of(t.open_legs, a);
  const std::size_t pb = position_of(t.open_legs, b);
  if (pa == pb) throw ContractViolation("self-trace of a leg with itself");
  const auto rest = complement(t.open_legs.size(), {pa, pb});
  TraceResult res;
  for (std::size_t i : rest) res.tensor.open_legs.push_back(t.open_legs[i]);
  Accumulator acc(res.tensor.stride());
  PauliKey key(res.tensor.stride());
  for (std::size_t i = 0; i < t.nnz(); ++i) {
    if (key_symbol(t.key(i), pa) != key_symbol(t.key(i), pb)) continue;
    std::fill(key.begin(), key.end(), 0);
    pick(t.key(i).data(), rest, key.data());
    acc.slot(key.data()).add(t.poly(i));
    ++res.multiplications;
  }
  acc.emit(res.tensor);
  res.tensor.pcm = self_trace(t.pcm, pa, pb);
  res.tensor.closed_leg_count = t.closed_leg_count;
  return res;
}

BigInt nnz_count(const ParityCheckMatrix& h, std::span<const std::size_t> legs) {
  return BigInt(1) << rank(restrict_to(h, legs));
}

double DensityRecord::density() const { return std::ldexp(static_cast<double>(nnz), -2 * static_cast<int>(open_leg_count)); }

std::string DensityRecord::ratio() const { return std::to_string(nnz) + "/4^" + std::to_string(open_leg_count); }

ContractionResult contract_network(const TensorNetwork& net, const ContractionTree& tree,
                                   EnumerationLimit leaf_limit) {
  validate_tree(net, tree);
  if (!net.is_connected()) throw ContractViolation("network is disconnected");
  std::map<int, TensorWEP> live;  // tree node index -> tensor
  auto leaf_tensor = [&](int tree_index) {
    const int id = tree.nodes()[static_cast<std::size_t>(tree_index)].leaf;
    const auto open = net.edge_legs(id);
    return brute_force_tensor_wep(net.node(id).block.pcm, open, id, leaf_limit);
  };

  ContractionResult out;
  const auto order = tree.merge_order();
  if (order.empty()) {
    live.emplace(tree.root(), leaf_tensor(tree.root()));
    const auto& t = live.at(tree.root());
    out.density.push_back({0, t.open_legs.size(), t.nnz()});
  }
  for (std::size_t step = 0; step < order.size(); ++step) {
    const auto& nd = tree.nodes()[static_cast<std::size_t>(order[step])];
    for (int child : {nd.left, nd.right}) {
      if (tree.is_leaf(child)) live.emplace(child, leaf_tensor(child));
    }
    TensorWEP left = std::move(live.at(nd.left));
    TensorWEP right = std::move(live.at(nd.right));
    live.erase(nd.left);
    live.erase(nd.right);

    std::vector<std::pair<LegRef, LegRef>> pairs;
    for (const LegRef& l : left.open_legs) {
      const auto p = net.partner(l);
      if (p && std::find(right.open_legs.begin(), right.open_legs.end(), *p) != right.open_legs.end()) {
        pairs.emplace_back(l, *p);
      }
    }
    TraceResult r = wep_trace(left, right, pairs);
    out.true_cost += r.multiplications;
    out.merge_costs.push_back(r.multiplications);
    out.density.push_back({step, r.tensor.open_legs.size(), r.tensor.nnz()});
    live.emplace(order[step], std::move(r.tensor));
  }
  const WeightPolynomial raw = live.at(tree.root()).scalar();
  out.redundancy = raw[0];
  if (out.redundancy == 0) throw VerificationError("contracted scalar has no identity term");
  out.A = raw.divided_exactly(out.redundancy);
  return out;
}

WeightPolynomial macwilliams_transform(const WeightPolynomial& p, std::size_t n, std::size_t shift) {
  if (p.degree() > n) throw InvalidInputError("enumerator degree exceeds n");
  // Binomial rows with signs for (1 - z)^w and powers of 3 for (1 + 3z)^(n-w).
  std::vector<std::vector<BigInt>> binom(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    binom[i].assign(i + 1, 1);
    for (std::size_t j = 1; j < i; ++j) binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
  }
  std::vector<BigInt> pow3(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) pow3[i] = pow3[i - 1] * 3;

  std::vector<BigInt> acc(n + 1, 0);
  for (std::size_t w = 0; w <= p.degree(); ++w) {
    const BigInt c = p[w];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= w; ++i) {
      const BigInt a = (i % 2 ? -binom[w][i] : binom[w][i]) * c;
      for (std::size_t j = 0; j <= n - w; ++j) acc[i + j] += a * binom[n - w][j] * pow3[j];
    }
  }
  const BigInt d = BigInt(1) << shift;
  WeightPolynomial out;
  for (std::size_t i = 0; i <= n; ++i) {
    BigInt q, r;
    boost::multiprecision::divide_qr(acc[i], d, q, r);
    if (r != 0 || q < 0) {
      throw InvalidInputError("MacWilliams transform is not integral at z^" + std::to_string(i) +
                              "; the input is not a stabilizer enumerator");
    }
    out.add_monomial(i, q);
  }
  return out;
}

WeightPolynomial macwilliams_B(const WeightPolynomial& a, std::size_t n, std::size_t k) {
  if (k > n) throw InvalidInputError("k exceeds n");
  return macwilliams_transform(a, n, n - k);
}

WeightPolynomial macwilliams_A(const WeightPolynomial& b, std::size_t n, std::size_t k) {
  if (k > n) throw InvalidInputError("k exceeds n");
  return macwilliams_transform(b, n, n + k);
}

std::size_t distance(const WeightPolynomial& a, const WeightPolynomial& b) {
  const std::size_t top = std::max(a.degree(), b.degree());
  std::optional<std::size_t> d;
  for (std::size_t w = 0; w <= top; ++w) {
    if (b[w] < a[w]) {
      throw InvalidInputError("B_" + std::to_string(w) + " < A_" + std::to_string(w) + "; not a valid enumerator pair");
    }
    if (!d && b[w] > a[w]) d = w;
  }
  if (!d) throw InvalidInputError("A equals B: the code is a stabilizer state with no logical distance");
  return *d;
}

}  // namespace qlego
