#pragma once

// Intermediate tensors of a contraction, tracked by their open legs and,
// for the rank-based costs, their stabilizer group projected onto those
// legs. Projection commutes with tracing because the trace condition only
// reads traced (hence kept) coordinates.

#include <vector>

#include "qlego/network.hpp"
#include "qlego/schedule.hpp"

namespace qlego::detail {

struct Part {
  std::vector<LegRef> open;
  ParityCheckMatrix h;  // columns = open legs, reduced; empty when untracked
  std::size_t rank() const { return h.num_rows(); }
};

Part leaf_part(const TensorNetwork& net, int id, bool with_pcm);

struct MergedPart {
  Part part;
  MergeCost cost;
};

/// Joins two parts along every network edge between them. Throws
/// ContractViolation when no edge crosses. With build = false only the
/// cost is computed.
MergedPart merge_parts(const TensorNetwork& net, const Part& a, const Part& b, CostKind kind, bool build = true);

/// Open legs left after joining, without computing anything else.
std::size_t merged_leg_count(const TensorNetwork& net, const Part& a, const Part& b);

}  // namespace qlego::detail
