#include <bit>
#include <optional>

#include "parts.hpp"
#include "qlego/errors.hpp"
#include "qlego/schedule.hpp"

namespace qlego {

namespace {

using Mask = std::uint32_t;

struct Subset {
  bool connected = false;
  BigInt cost = 0;
  Mask split = 0;  // left child; holds the lowest node of the subset
  std::optional<detail::Part> part;
};

ContractionTree build(const std::vector<Subset>& table, const std::vector<int>& ids, Mask mask) {
  if (std::popcount(mask) == 1) return ContractionTree::single(ids[static_cast<std::size_t>(std::countr_zero(mask))]);
  const Mask a = table[mask].split;
  return ContractionTree::join(build(table, ids, a), build(table, ids, mask ^ a));
}

}  // namespace

ScheduleResult optimal_tree(const TensorNetwork& net, CostKind kind, std::size_t node_cap) {
  const std::size_t n = net.size();
  if (n == 0) throw ContractViolation("empty network");
  if (n > node_cap || n > 24) {
    throw ResourceLimitError("optimal_tree handles at most " + std::to_string(node_cap) + " nodes, network has " +
                             std::to_string(n) + "; use hyper_greedy instead");
  }
  if (!net.is_connected()) throw ContractViolation("network is disconnected");

  std::vector<int> ids;
  for (const auto& nd : net.nodes()) ids.push_back(nd.id);
  std::vector<Mask> adj(n, 0);
  for (const auto& e : net.edges()) {
    const auto a = net.index_of(e.a.node), b = net.index_of(e.b.node);
    adj[a] |= Mask{1} << b;
    adj[b] |= Mask{1} << a;
  }
  auto neighbourhood = [&](Mask m) {
    Mask out = 0;
    for (Mask r = m; r; r &= r - 1) out |= adj[static_cast<std::size_t>(std::countr_zero(r))];
    return out;
  };

  const Mask full = (Mask{1} << n) - 1;
  std::vector<Subset> table(std::size_t{full} + 1);
  const bool with_pcm = kind == CostKind::Sst;
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = table[Mask{1} << i];
    s.connected = true;
    s.part = detail::leaf_part(net, ids[i], with_pcm);
  }
  // Submasks are numerically smaller, so increasing order visits children
  // before parents.
  for (Mask mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    const Mask low = mask & (~mask + 1);
    const Mask rest = mask ^ low;
    Subset& s = table[mask];
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
      const Mask a = low | sub;
      const Mask b = mask ^ a;
      if (b != 0 && table[a].connected && table[b].connected && (neighbourhood(a) & b) != 0) {
        const auto merged = detail::merge_parts(net, *table[a].part, *table[b].part, kind, !s.connected);
        BigInt cost = table[a].cost + table[b].cost + merged.cost.cost();
        if (!s.connected) {
          s.connected = true;
          s.cost = std::move(cost);
          s.split = a;
          s.part = merged.part;
        } else if (cost < s.cost || (cost == s.cost && a < s.split)) {
          s.cost = std::move(cost);
          s.split = a;
        }
      }
      if (sub == 0) break;
    }
  }

  ScheduleResult out;
  out.tree = build(table, ids, full);
  out.report = tree_cost(net, out.tree, kind);
  if (out.report.total != table[full].cost) throw VerificationError("optimal_tree table disagrees with the tree cost");
  return out;
}

}  // namespace qlego
