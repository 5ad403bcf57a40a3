#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlego/enumerator.hpp"
#include "qlego/schedule.hpp"

namespace qlego {

struct CompareOptions {
  TrialBudget budget;
  std::size_t reps = 20;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool rank_size = false;
  /// Contract every best tree and check its SST total against the counted
  /// multiplications.
  bool verify = false;
  /// Fill the wall_ms column; off by default so reruns are byte-identical.
  bool timing = false;
};

struct CompareRow {
  CostKind kind = CostKind::Sst;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::size_t best_trial = 0;
  /// True contraction cost of the tree the cost function picked.
  BigInt true_cost = 0;
  double wall_ms = 0;
};

struct CostStats {
  double geo_mean = 0;
  double geo_std = 1;
};

struct CompareResult {
  std::string network;
  std::vector<CompareRow> rows;  // rep-major, dense before sst
  CostStats dense, sst;
  /// Geometric-mean dense cost over geometric-mean SST cost.
  double improvement = 1;
  CrossoverReport crossover;  // best SST cost of all reps against 2^(n-k)
  bool deterministic = true;
};

/// Runs hyper_greedy under both cost kinds for each repetition. Both kinds
/// share the repetition seed, so they see the same sampled trees and differ
/// only in which tree they pick.
CompareResult compare_cost_functions(const TensorNetwork& net, const std::string& name, std::size_t n, std::size_t k,
                                     const CompareOptions& options);

std::string compare_csv(const CompareResult& r, bool timing);

CostStats geometric_stats(const std::vector<BigInt>& values);

struct DensityProfile {
  std::vector<DensityRecord> records;  // one per merge output, scalar excluded
  double mean = 1;
};

/// Densities of the intermediate tensors of a contraction. The final
/// scalar is left out unless it is the only tensor.
DensityProfile density_profile(const ContractionResult& r);
std::string density_csv(const DensityProfile& p);

}  // namespace qlego
