#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlego/lego.hpp"
#include "qlego/symplectic.hpp"

namespace qlego {

/// A leg of a network node, identified by node id and the leg index of its
/// LEGO.
struct LegRef {
  int node = 0;
  std::size_t leg = 0;
  friend auto operator<=>(const LegRef&, const LegRef&) = default;
};

struct Edge {
  LegRef a;
  LegRef b;
};

struct NetworkNode {
  int id = 0;
  LegoBlock block;
};

/// LEGO instances joined by pairwise leg-to-leg edges. Every leg takes part
/// in at most one edge and no edge joins a node to itself.
class TensorNetwork {
 public:
  /// Appends a node with the next free id and returns that id.
  int add_node(LegoBlock block);
  /// Appends a node with an explicit id (used by the JSON reader).
  void add_node(int id, LegoBlock block);
  void connect(LegRef a, LegRef b);

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }

  bool contains(int id) const;
  /// Position of the node in node order; throws ContractViolation.
  std::size_t index_of(int id) const;
  const NetworkNode& node(int id) const { return nodes_[index_of(id)]; }

  std::optional<LegRef> partner(LegRef leg) const;
  /// Legs not in any edge, in canonical order (node order, then leg index).
  std::vector<LegRef> dangling() const;
  /// Dangling legs whose role is Physical, canonical order.
  std::vector<LegRef> physical_dangling() const;
  /// Legs of `id` that take part in an edge, ascending.
  std::vector<std::size_t> edge_legs(int id) const;
  /// Node ids adjacent to `id`, in node order, without duplicates.
  std::vector<int> neighbors(int id) const;

  /// Connected components as lists of node ids (node order).
  std::vector<std::vector<int>> components() const;
  bool is_connected() const;

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::optional<LegRef>>> links_;
  int next_id_ = 0;
};

struct CodeSpec {
  std::size_t n = 0;
  std::size_t k = 0;
  ParityCheckMatrix pcm;
  std::string name;
};

/// Computes k = n - rank. Throws InvalidInputError when rows anticommute.
CodeSpec make_code(ParityCheckMatrix pcm, std::string name);

/// Reduced PCM of the whole network over its dangling legs in canonical
/// order. Throws ContractViolation for a disconnected network.
ParityCheckMatrix network_pcm(const TensorNetwork& net);
/// Same, folding nodes in the given order (a permutation of node ids).
ParityCheckMatrix network_pcm(const TensorNetwork& net, std::span<const int> fold_order);

/// Merges each group of nodes into one Custom node whose legs are the
/// group's external legs in canonical order. The merged node keeps the id
/// of the group's first node in node order. Groups must partition the
/// nodes.
TensorNetwork fuse_groups(const TensorNetwork& net, const std::vector<std::vector<int>>& groups);

/// Folds every stopper into the node it caps.
TensorNetwork absorb_stoppers(const TensorNetwork& net);

// Layout generators.
TensorNetwork layout_concat_rep(int distance, int layers);
TensorNetwork layout_rsc(int rows, int cols);
TensorNetwork layout_happy(int layers);
TensorNetwork layout_msp(const CodeSpec& code);
TensorNetwork layout_tanner(const CodeSpec& code);

/// Standard rotated-surface-code stabilizers on a rows x cols patch,
/// qubits numbered row-major.
ParityCheckMatrix rotated_surface_code_pcm(int rows, int cols);

struct Verification {
  bool ok = false;
  std::string message;
  explicit operator bool() const { return ok; }
};

Verification verify_network_code(const TensorNetwork& net, const CodeSpec& code);

/// PCM text: one row per line, Pauli strings ("XZZXI") or symplectic rows
/// ("1100|0011"); '#' starts a comment, blank lines are skipped.
ParityCheckMatrix parse_pcm_text(std::string_view text);
std::string format_pcm_text(const ParityCheckMatrix& h);

CodeSpec ingest_code(std::string_view text, std::string name = "code");
CodeSpec ingest_code_file(const std::filesystem::path& path);

}  // namespace qlego
