#include "qlego/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "qlego/errors.hpp"

namespace qlego {

CostStats geometric_stats(const std::vector<BigInt>& values) {
  CostStats s;
  if (values.empty()) return s;
  std::vector<double> logs;
  for (const auto& v : values) {
    if (v <= 0) throw InvalidInputError("geometric statistics need positive costs");
    logs.push_back(std::log(static_cast<double>(v)));
  }
  double mean = 0;
  for (double l : logs) mean += l;
  mean /= static_cast<double>(logs.size());
  double var = 0;
  for (double l : logs) var += (l - mean) * (l - mean);
  var /= static_cast<double>(logs.size());
  s.geo_mean = std::exp(mean);
  s.geo_std = std::exp(std::sqrt(var));
  return s;
}

CompareResult compare_cost_functions(const TensorNetwork& net, const std::string& name, std::size_t n, std::size_t k,
                                     const CompareOptions& options) {
  if (options.reps == 0) throw ContractViolation("compare needs at least one repetition");
  CompareResult out;
  out.network = name;
  out.deterministic = !options.budget.wall_clock;
  std::vector<BigInt> dense_costs, sst_costs;
  BigInt best_sst = -1;
  for (std::size_t rep = 0; rep < options.reps; ++rep) {
    const std::uint64_t seed = mix_seed(options.seed + rep);
    for (CostKind kind : {CostKind::Dense, CostKind::Sst}) {
      const auto start = std::chrono::steady_clock::now();
      const auto hg = hyper_greedy(net, kind, options.budget, seed, options.threads, options.rank_size);
      const auto stop = std::chrono::steady_clock::now();
      CompareRow row;
      row.kind = kind;
      row.rep = rep;
      row.seed = seed;
      row.best_trial = hg.best_trial;
      row.true_cost = kind == CostKind::Sst ? hg.best.total : sst_cost(net, hg.best_tree).total;
      row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      if (options.verify) {
        const auto counted = contract_network(net, hg.best_tree);
        if (counted.true_cost != row.true_cost) {
          throw VerificationError("SST cost " + row.true_cost.str() + " differs from counted multiplications " +
                                  counted.true_cost.str() + " on " + hg.best_tree.to_string());
        }
      }
      (kind == CostKind::Dense ? dense_costs : sst_costs).push_back(row.true_cost);
      if (kind == CostKind::Sst && (best_sst < 0 || row.true_cost < best_sst)) best_sst = row.true_cost;
      out.rows.push_back(std::move(row));
    }
  }
  out.dense = geometric_stats(dense_costs);
  out.sst = geometric_stats(sst_costs);
  out.improvement = out.sst.geo_mean > 0 ? out.dense.geo_mean / out.sst.geo_mean : 1.0;
  out.crossover = brute_force_crossover(best_sst, n, k);
  return out;
}

std::string compare_csv(const CompareResult& r, bool timing) {
  std::ostringstream os;
  os << "network,cost_kind,trial,total_cost,wall_ms,seed\n";
  for (const auto& row : r.rows) {
    os << r.network << ',' << cost_kind_name(row.kind) << ',' << row.rep << ',' << row.true_cost << ',';
    if (timing) os << row.wall_ms;
    os << ',' << row.seed << '\n';
  }
  return os.str();
}

DensityProfile density_profile(const ContractionResult& r) {
  DensityProfile p;
  p.records = r.density;
  if (p.records.size() > 1 && p.records.back().open_leg_count == 0) p.records.pop_back();
  double sum = 0;
  for (const auto& rec : p.records) sum += rec.density();
  p.mean = p.records.empty() ? 1.0 : sum / static_cast<double>(p.records.size());
  return p;
}

std::string density_csv(const DensityProfile& p) {
  std::ostringstream os;
  os << "step,open_legs,nnz,density,ratio\n";
  os.precision(10);
  for (const auto& rec : p.records) {
    os << rec.step << ',' << rec.open_leg_count << ',' << rec.nnz << ',' << rec.density() << ',' << rec.ratio() << '\n';
  }
  return os.str();
}

}  // namespace qlego
