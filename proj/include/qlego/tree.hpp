#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qlego/network.hpp"

namespace qlego {

/// Full binary merge schedule over network node ids. Tree nodes are stored
/// in a flat array; a leaf carries a network node id, an internal node its
/// (left, right) children.
class ContractionTree {
 public:
  struct Node {
    int leaf = -1;  // network node id, or -1 for internal nodes
    int left = -1;
    int right = -1;
  };

  ContractionTree() = default;
  static ContractionTree single(int leaf);

  int add_leaf(int network_node);
  int add_merge(int left, int right);
  /// The last added node is the root unless set explicitly.
  void set_root(int index) { root_ = index; }

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  bool empty() const { return nodes_.empty(); }
  bool is_leaf(int index) const { return nodes_[static_cast<std::size_t>(index)].leaf >= 0; }

  /// Internal nodes in post order (children before parents).
  std::vector<int> merge_order() const;
  /// Network node ids under a tree node, in tree order.
  std::vector<int> leaves_under(int index) const;
  std::vector<int> leaves() const { return empty() ? std::vector<int>{} : leaves_under(root_); }

  /// Joins two trees under a new root.
  static ContractionTree join(const ContractionTree& a, const ContractionTree& b);

  /// Nested-array text form: [[0,1],2].
  std::string to_string() const;

  friend bool operator==(const ContractionTree& a, const ContractionTree& b) {
    return a.to_string() == b.to_string();
  }

 private:
  int copy_from(const ContractionTree& other, int index);
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Throws ContractViolation unless the leaves are exactly the network's
/// node ids and every merge has an edge crossing it.
void validate_tree(const TensorNetwork& net, const ContractionTree& tree);

}  // namespace qlego
