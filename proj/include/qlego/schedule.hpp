#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qlego/polynomial.hpp"
#include "qlego/tree.hpp"

namespace qlego {

enum class CostKind { Dense, Sst };

std::string_view cost_kind_name(CostKind kind);
CostKind parse_cost_kind(std::string_view name);

/// One merge of a tree. Every merge cost is a power of two, stored as its
/// exponent. Ranks are zero in dense reports.
struct MergeCost {
  int tree_node = -1;
  std::size_t left_legs = 0;
  std::size_t right_legs = 0;
  std::size_t left_rank = 0;
  std::size_t right_rank = 0;
  std::size_t stacked_rank = 0;
  std::size_t log2_cost = 0;
  BigInt cost() const { return BigInt(1) << log2_cost; }
};

struct CostReport {
  CostKind kind = CostKind::Sst;
  std::vector<MergeCost> merges;  // merge order of the tree
  BigInt total = 0;
};

/// Per merge 4^(open legs of left + open legs of right); a leaf's open legs
/// are its edge legs.
CostReport dense_cost(const TensorNetwork& net, const ContractionTree& tree);
/// Per merge 2^(r1 + r2 - rank W): r1, r2 are the ranks of the children's
/// stabilizer groups on their open legs, W stacks both restricted to the
/// joined legs. Equals the number of polynomial multiplications made by
/// contract_network on the same tree.
CostReport sst_cost(const TensorNetwork& net, const ContractionTree& tree);
CostReport tree_cost(const TensorNetwork& net, const ContractionTree& tree, CostKind kind);

struct ScheduleResult {
  ContractionTree tree;
  CostReport report;
};

constexpr std::size_t kOptimalNodeCap = 12;

/// Exact minimum over all valid trees by dynamic programming over connected
/// node subsets. Throws ResourceLimitError above `node_cap` nodes.
ScheduleResult optimal_tree(const TensorNetwork& net, CostKind kind, std::size_t node_cap = kOptimalNodeCap);

struct GreedyParams {
  double alpha = 1.0;
  double tau = 1.0;
  std::uint64_t seed = 0;
  /// Size a tensor by 2^rank of its group on the open legs instead of 4^legs.
  bool rank_size = false;
};

/// Below this temperature sampling becomes a deterministic argmax.
constexpr double kArgmaxTau = 1e-6;

/// Bottom-up Boltzmann-weighted merging of edge-connected components with
/// weight exp((alpha (s_i + s_j) - s_k / alpha) / tau), sizes in log2.
/// Candidates are ordered by their node-id sets; ties in argmax mode go to
/// the first candidate.
ContractionTree greedy_tree(const TensorNetwork& net, const GreedyParams& params);
ScheduleResult greedy_sample(const TensorNetwork& net, CostKind kind, const GreedyParams& params);

/// Uniformly random order of edges, merging whenever an edge joins two
/// different components; left/right children are swapped at random.
ContractionTree random_tree(const TensorNetwork& net, std::mt19937_64& rng);

struct TrialBudget {
  std::size_t trials = 64;
  /// When set, trials run until the deadline and the result depends on
  /// timing.
  std::optional<std::chrono::milliseconds> wall_clock;
};

struct TrialRecord {
  std::size_t index = 0;
  GreedyParams params;
  ContractionTree tree;
  CostReport report;
};

struct HyperGreedyResult {
  ContractionTree best_tree;
  CostReport best;
  std::size_t best_trial = 0;
  std::vector<TrialRecord> trials;  // by trial index
  bool deterministic = true;
};

/// Per-trial parameters: alpha ~ U[0, 2], tau log-uniform in [1e-2, 1],
/// greedy seed, all derived from (master_seed, index).
GreedyParams trial_params(std::uint64_t master_seed, std::size_t index, bool rank_size = false);

/// Random search over greedy hyperparameters; the best trial is the minimum
/// by (total cost, trial index). `threads` = 0 uses the hardware count.
HyperGreedyResult hyper_greedy(const TensorNetwork& net, CostKind kind, const TrialBudget& budget,
                               std::uint64_t master_seed, unsigned threads = 0, bool rank_size = false);

struct CrossoverReport {
  BigInt contraction_cost = 0;
  BigInt brute_force_cost = 0;  // 2^(n - k)
  bool brute_force_wins = false;  // brute force cost <= contraction cost
  /// contraction cost / brute force cost.
  double ratio = 0;
};

CrossoverReport brute_force_crossover(const BigInt& contraction_cost, std::size_t n, std::size_t k);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);
/// SplitMix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace qlego
