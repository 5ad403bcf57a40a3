#pragma once

// Independent reference implementations used only by the tests. They work
// on explicit group elements so they share no elimination code with the
// library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qlego/symplectic.hpp"

namespace oracle {

using qlego::ParityCheckMatrix;
using qlego::PauliOp;

inline std::set<std::string> group_strings(const ParityCheckMatrix& h) {
  std::set<std::string> out;
  for (const auto& p : qlego::enumerate_group(h)) out.insert(p.to_string());
  return out;
}

// All products of the rows, closed under multiplication, computed by
// repeated closure instead of a basis.
inline std::set<std::string> closure(std::size_t legs, const std::vector<std::string>& rows) {
  auto mul = [](const std::string& a, const std::string& b) {
    std::string out(a.size(), 'I');
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int xa = a[i] == 'X' || a[i] == 'Y', za = a[i] == 'Z' || a[i] == 'Y';
      const int xb = b[i] == 'X' || b[i] == 'Y', zb = b[i] == 'Z' || b[i] == 'Y';
      out[i] = "IXZY"[(xa ^ xb) | ((za ^ zb) << 1)];
    }
    return out;
  };
  std::set<std::string> g{std::string(legs, 'I')};
  for (const auto& r : rows) {
    std::set<std::string> next = g;
    for (const auto& e : g) next.insert(mul(e, r));
    g = std::move(next);
  }
  return g;
}

// Bell projection by filtering: keep elements whose symbols on a and b
// agree, then drop those legs.
inline std::set<std::string> filter_trace(const std::set<std::string>& group,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::set<std::string> out;
  for (const auto& e : group) {
    bool ok = true;
    std::vector<bool> drop(e.size(), false);
    for (auto [a, b] : pairs) {
      ok = ok && e[a] == e[b];
      drop[a] = drop[b] = true;
    }
    if (!ok) continue;
    std::string kept;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!drop[i]) kept += e[i];
    }
    out.insert(kept);
  }
  return out;
}

inline PauliOp random_pauli(std::size_t legs, std::mt19937_64& rng) {
  PauliOp p(legs);
  for (std::size_t i = 0; i < legs; ++i) {
    const auto v = rng() & 3;
    p.set(i, v & 1, v & 2);
  }
  return p;
}

// Random isotropic PCM with `rows` independent commuting rows (fewer if
// the sampler gives up).
inline ParityCheckMatrix random_isotropic(std::size_t legs, std::size_t rows, std::mt19937_64& rng) {
  ParityCheckMatrix h(legs);
  for (int attempt = 0; attempt < 2000 && h.num_rows() < rows; ++attempt) {
    PauliOp p = random_pauli(legs, rng);
    bool ok = !p.is_identity();
    for (std::size_t r = 0; ok && r < h.num_rows(); ++r) ok = qlego::commutes(p, h.row(r));
    if (!ok) continue;
    ParityCheckMatrix probe = h;
    probe.append_row(p);
    if (qlego::rank(probe) == h.num_rows() + 1) h = probe;
  }
  return h;
}

// Weight histogram of a set of Pauli strings, optionally counting only
// some positions.
inline std::vector<std::uint64_t> weight_histogram(const std::set<std::string>& group,
                                                   const std::vector<std::size_t>& positions) {
  std::vector<std::uint64_t> hist(positions.size() + 1, 0);
  for (const auto& e : group) {
    std::size_t w = 0;
    for (std::size_t p : positions) w += e[p] != 'I';
    ++hist[w];
  }
  return hist;
}

}  // namespace oracle

#include "qlego/tree.hpp"

namespace oracle {

// Uniformly random edge, merged if its endpoints are still apart; gives a
// valid tree for any connected network.
inline qlego::ContractionTree random_edge_tree(const qlego::TensorNetwork& net, std::mt19937_64& rng) {
  qlego::ContractionTree t;
  std::map<int, int> comp;  // network node id -> component representative
  std::map<int, int> top;   // representative -> tree index
  for (const auto& n : net.nodes()) {
    comp[n.id] = n.id;
    top[n.id] = t.add_leaf(n.id);
  }
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  std::vector<qlego::Edge> edges = net.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  for (const auto& e : edges) {
    int a = find(e.a.node), b = find(e.b.node);
    if (a == b) continue;
    if (rng() & 1) std::swap(a, b);
    const int m = t.add_merge(top[a], top[b]);
    comp[b] = a;
    top[a] = m;
  }
  return t;
}

}  // namespace oracle

namespace oracle {

// Normalizer enumerator by scanning all 4^n Paulis.
inline std::vector<std::uint64_t> normalizer_histogram(const qlego::ParityCheckMatrix& h) {
  const std::size_t n = h.num_legs();
  const auto rows = h.rows();
  std::vector<std::uint64_t> hist(n + 1, 0);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code) {
    qlego::PauliOp p(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = (code >> (2 * i)) & 3;
      p.set(i, s & 1, s & 2);
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && qlego::commutes(p, r);
    if (ok) ++hist[p.weight()];
  }
  return hist;
}

}  // namespace oracle

namespace oracle {

// Every valid tree, by trying every sequence of merges between
// edge-connected components. Duplicates are removed through to_string.
inline std::vector<qlego::ContractionTree> all_trees(const qlego::TensorNetwork& net) {
  struct State {
    std::vector<std::set<int>> sets;
    std::vector<qlego::ContractionTree> trees;
  };
  std::map<std::string, qlego::ContractionTree> found;
  std::vector<State> stack;
  State start;
  for (const auto& n : net.nodes()) {
    start.sets.push_back({n.id});
    start.trees.push_back(qlego::ContractionTree::single(n.id));
  }
  stack.push_back(std::move(start));
  while (!stack.empty()) {
    State s = std::move(stack.back());
    stack.pop_back();
    if (s.sets.size() == 1) {
      found.emplace(s.trees[0].to_string(), s.trees[0]);
      continue;
    }
    for (std::size_t i = 0; i < s.sets.size(); ++i) {
      for (std::size_t j = 0; j < s.sets.size(); ++j) {
        if (i == j) continue;
        bool linked = false;
        for (const auto& e : net.edges()) {
          linked = linked || (s.sets[i].count(e.a.node) && s.sets[j].count(e.b.node)) ||
                   (s.sets[i].count(e.b.node) && s.sets[j].count(e.a.node));
        }
        if (!linked) continue;
        State next;
        for (std::size_t k = 0; k < s.sets.size(); ++k) {
          if (k == i || k == j) continue;
          next.sets.push_back(s.sets[k]);
          next.trees.push_back(s.trees[k]);
        }
        auto merged = s.sets[i];
        merged.insert(s.sets[j].begin(), s.sets[j].end());
        next.sets.push_back(merged);
        next.trees.push_back(qlego::ContractionTree::join(s.trees[i], s.trees[j]));
        stack.push_back(std::move(next));
      }
    }
  }
  std::vector<qlego::ContractionTree> out;
  for (auto& [k, t] : found) out.push_back(std::move(t));
  return out;
}

}  // namespace oracle
