#include "qlego/tree.hpp"

#include <algorithm>
#include <set>

#include "qlego/errors.hpp"

namespace qlego {

ContractionTree ContractionTree::single(int leaf) {
  ContractionTree t;
  t.add_leaf(leaf);
  return t;
}

int ContractionTree::add_leaf(int network_node) {
  if (network_node < 0) throw ContractViolation("tree leaves must carry a non-negative node id");
  nodes_.push_back({network_node, -1, -1});
  root_ = static_cast<int>(nodes_.size()) - 1;
  return root_;
}

int ContractionTree::add_merge(int left, int right) {
  const int n = static_cast<int>(nodes_.size());
  if (left < 0 || right < 0 || left >= n || right >= n || left == right) {
    throw ContractViolation("bad merge children " + std::to_string(left) + ", " + std::to_string(right));
  }
  nodes_.push_back({-1, left, right});
  root_ = n;
  return root_;
}

std::vector<int> ContractionTree::merge_order() const {
  std::vector<int> out;
  if (empty()) return out;
  // Iterative post order; a node is emitted once both children are done.
  std::vector<std::pair<int, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [i, expanded] = stack.back();
    stack.pop_back();
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.leaf >= 0) continue;
    if (expanded) {
      out.push_back(i);
      continue;
    }
    stack.push_back({i, true});
    stack.push_back({nd.right, false});
    stack.push_back({nd.left, false});
  }
  return out;
}

std::vector<int> ContractionTree::leaves_under(int index) const {
  std::vector<int> out;
  std::vector<int> stack{index};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.leaf >= 0) {
      out.push_back(nd.leaf);
    } else {
      stack.push_back(nd.right);
      stack.push_back(nd.left);
    }
  }
  return out;
}

int ContractionTree::copy_from(const ContractionTree& other, int index) {
  const Node& nd = other.nodes_[static_cast<std::size_t>(index)];
  if (nd.leaf >= 0) return add_leaf(nd.leaf);
  const int l = copy_from(other, nd.left);
  const int r = copy_from(other, nd.right);
  return add_merge(l, r);
}

ContractionTree ContractionTree::join(const ContractionTree& a, const ContractionTree& b) {
  if (a.empty() || b.empty()) throw ContractViolation("cannot join an empty tree");
  ContractionTree t;
  const int l = t.copy_from(a, a.root_);
  const int r = t.copy_from(b, b.root_);
  t.add_merge(l, r);
  return t;
}

std::string ContractionTree::to_string() const {
  if (empty()) return "[]";
  std::string out;
  // Explicit stack of (node, state): 0 = open, 1 = between children, 2 = close.
  std::vector<std::pair<int, int>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto& [i, state] = stack.back();
    const Node& nd = nodes_[static_cast<std::size_t>(i)];
    if (nd.leaf >= 0) {
      out += std::to_string(nd.leaf);
      stack.pop_back();
      continue;
    }
    if (state == 0) {
      out += "[";
      state = 1;
      stack.push_back({nd.left, 0});
    } else if (state == 1) {
      out += ",";
      state = 2;
      stack.push_back({nd.right, 0});
    } else {
      out += "]";
      stack.pop_back();
    }
  }
  return out;
}

void validate_tree(const TensorNetwork& net, const ContractionTree& tree) {
  if (tree.empty()) throw ContractViolation("empty contraction tree");
  const auto leaves = tree.leaves();
  std::set<int> seen;
  for (int id : leaves) {
    if (!net.contains(id)) throw ContractViolation("tree leaf " + std::to_string(id) + " is not a network node");
    if (!seen.insert(id).second) throw ContractViolation("tree leaf " + std::to_string(id) + " appears twice");
  }
  if (seen.size() != net.size()) {
    throw ContractViolation("tree covers " + std::to_string(seen.size()) + " of " + std::to_string(net.size()) +
                            " network nodes");
  }
  std::vector<int> side(net.size(), 0);
  for (int m : tree.merge_order()) {
    const auto& nd = tree.nodes()[static_cast<std::size_t>(m)];
    for (int id : tree.leaves_under(nd.left)) side[net.index_of(id)] = 1;
    bool crossing = false;
    for (int id : tree.leaves_under(nd.right)) {
      for (const std::size_t leg : net.edge_legs(id)) {
        const auto p = net.partner({id, leg});
        if (side[net.index_of(p->node)] == 1) crossing = true;
      }
    }
    for (int id : tree.leaves_under(nd.left)) side[net.index_of(id)] = 0;
    if (!crossing) {
      throw ContractViolation("merge at tree node " + std::to_string(m) +
                              " joins components with no edge between them");
    }
  }
}

}  // namespace qlego
