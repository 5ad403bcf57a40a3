#include <algorithm>

#include "parts.hpp"
#include "qlego/errors.hpp"
#include "qlego/schedule.hpp"

namespace qlego {

namespace detail {

Part leaf_part(const TensorNetwork& net, int id, bool with_pcm) {
  Part p;
  const auto legs = net.edge_legs(id);
  for (std::size_t leg : legs) p.open.push_back({id, leg});
  if (with_pcm) p.h = reduced(restrict_to(net.node(id).block.pcm, legs));
  return p;
}

namespace {

struct Join {
  std::vector<std::size_t> pa, pb;  // aligned positions of joined legs
  std::vector<std::size_t> ra, rb;  // remaining positions
};

Join find_join(const TensorNetwork& net, const Part& a, const Part& b) {
  Join j;
  std::vector<bool> used_b(b.open.size(), false);
  for (std::size_t i = 0; i < a.open.size(); ++i) {
    const auto partner = net.partner(a.open[i]);
    std::size_t pos = b.open.size();
    if (partner) pos = static_cast<std::size_t>(std::find(b.open.begin(), b.open.end(), *partner) - b.open.begin());
    if (pos < b.open.size()) {
      j.pa.push_back(i);
      j.pb.push_back(pos);
      used_b[pos] = true;
    } else {
      j.ra.push_back(i);
    }
  }
  for (std::size_t i = 0; i < b.open.size(); ++i) {
    if (!used_b[i]) j.rb.push_back(i);
  }
  if (j.pa.empty()) throw ContractViolation("merge joins parts with no edge between them");
  return j;
}

}  // namespace

std::size_t merged_leg_count(const TensorNetwork& net, const Part& a, const Part& b) {
  const Join j = find_join(net, a, b);
  return j.ra.size() + j.rb.size();
}

MergedPart merge_parts(const TensorNetwork& net, const Part& a, const Part& b, CostKind kind, bool build) {
  const Join j = find_join(net, a, b);
  MergedPart out;
  for (std::size_t i : j.ra) out.part.open.push_back(a.open[i]);
  for (std::size_t i : j.rb) out.part.open.push_back(b.open[i]);
  MergeCost& c = out.cost;
  c.left_legs = a.open.size();
  c.right_legs = b.open.size();
  if (kind == CostKind::Dense) {
    c.log2_cost = 2 * (c.left_legs + c.right_legs);
    return out;
  }
  c.left_rank = a.rank();
  c.right_rank = b.rank();
  c.stacked_rank = stacked_rank(a.h, j.pa, b.h, j.pb);
  c.log2_cost = c.left_rank + c.right_rank - c.stacked_rank;
  if (!build) return out;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < j.pa.size(); ++i) pairs.emplace_back(j.pa[i], j.pb[i]);
  out.part.h = trace(a.h, b.h, pairs);
  return out;
}

}  // namespace detail

std::string_view cost_kind_name(CostKind kind) { return kind == CostKind::Dense ? "dense" : "sst"; }

CostKind parse_cost_kind(std::string_view name) {
  if (name == "dense") return CostKind::Dense;
  if (name == "sst") return CostKind::Sst;
  throw ParseError("unknown cost kind '" + std::string(name) + "' (expected dense or sst)");
}

CostReport tree_cost(const TensorNetwork& net, const ContractionTree& tree, CostKind kind) {
  validate_tree(net, tree);
  CostReport report;
  report.kind = kind;
  std::vector<detail::Part> parts(tree.nodes().size());
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& nd = tree.nodes()[i];
    if (nd.leaf >= 0) parts[i] = detail::leaf_part(net, nd.leaf, kind == CostKind::Sst);
  }
  for (int index : tree.merge_order()) {
    const auto& nd = tree.nodes()[static_cast<std::size_t>(index)];
    auto& left = parts[static_cast<std::size_t>(nd.left)];
    auto& right = parts[static_cast<std::size_t>(nd.right)];
    auto merged = detail::merge_parts(net, left, right, kind);
    merged.cost.tree_node = index;
    report.total += merged.cost.cost();
    report.merges.push_back(merged.cost);
    parts[static_cast<std::size_t>(index)] = std::move(merged.part);
    left = {};
    right = {};
  }
  return report;
}

CostReport dense_cost(const TensorNetwork& net, const ContractionTree& tree) {
  return tree_cost(net, tree, CostKind::Dense);
}

CostReport sst_cost(const TensorNetwork& net, const ContractionTree& tree) {
  return tree_cost(net, tree, CostKind::Sst);
}

CrossoverReport brute_force_crossover(const BigInt& contraction_cost, std::size_t n, std::size_t k) {
  if (k > n) throw InvalidInputError("k exceeds n");
  CrossoverReport r;
  r.contraction_cost = contraction_cost;
  r.brute_force_cost = BigInt(1) << (n - k);
  r.brute_force_wins = r.brute_force_cost <= r.contraction_cost;
  r.ratio = static_cast<double>(r.contraction_cost) / static_cast<double>(r.brute_force_cost);
  return r;
}

}  // namespace qlego
