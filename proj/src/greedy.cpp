#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "parts.hpp"
#include "qlego/errors.hpp"
#include "qlego/schedule.hpp"

namespace qlego {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

struct Component {
  std::vector<int> ids;  // sorted
  detail::Part part;
  int tree_index = -1;
};

double log2_size(const detail::Part& p, bool rank_size) {
  return rank_size ? static_cast<double>(p.rank()) : 2.0 * static_cast<double>(p.open.size());
}

}  // namespace

ContractionTree greedy_tree(const TensorNetwork& net, const GreedyParams& params) {
  if (!(params.tau > 0)) throw ContractViolation("greedy temperature must be positive");
  if (!(params.alpha >= 0)) throw ContractViolation("greedy alpha must be nonnegative");
  if (net.size() == 0) throw ContractViolation("empty network");
  if (!net.is_connected()) throw ContractViolation("network is disconnected");

  ContractionTree tree;
  std::vector<Component> comps;
  for (const auto& nd : net.nodes()) {
    comps.push_back({{nd.id}, detail::leaf_part(net, nd.id, params.rank_size), tree.add_leaf(nd.id)});
  }
  auto by_ids = [](const Component& a, const Component& b) { return a.ids < b.ids; };
  std::sort(comps.begin(), comps.end(), by_ids);

  // An alpha of exactly zero would divide the output-size term by zero; the
  // smallest positive alpha gives the same limit ordering.
  const double alpha = std::max(params.alpha, 1e-9);
  std::mt19937_64 rng(params.seed);
  std::map<int, std::size_t> owner;
  struct Candidate {
    std::size_t i, j;
    double score;
  };
  std::vector<Candidate> cands;
  while (comps.size() > 1) {
    owner.clear();
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (int id : comps[c].ids) owner[id] = c;
    }
    std::vector<std::vector<bool>> adjacent(comps.size(), std::vector<bool>(comps.size(), false));
    for (const auto& e : net.edges()) {
      const std::size_t a = owner.at(e.a.node), b = owner.at(e.b.node);
      if (a != b) adjacent[a][b] = adjacent[b][a] = true;
    }
    cands.clear();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (std::size_t j = i + 1; j < comps.size(); ++j) {
        if (!adjacent[i][j]) continue;
        double sk;
        if (params.rank_size) {
          sk = log2_size(detail::merge_parts(net, comps[i].part, comps[j].part, CostKind::Sst).part, true);
        } else {
          sk = 2.0 * static_cast<double>(detail::merged_leg_count(net, comps[i].part, comps[j].part));
        }
        const double si = log2_size(comps[i].part, params.rank_size);
        const double sj = log2_size(comps[j].part, params.rank_size);
        cands.push_back({i, j, alpha * (si + sj) - sk / alpha});
      }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : cands) best = std::max(best, c.score);
    std::size_t pick = 0;
    if (params.tau <= kArgmaxTau) {
      while (cands[pick].score != best) ++pick;
    } else {
      std::vector<double> cumulative(cands.size());
      double total = 0;
      for (std::size_t c = 0; c < cands.size(); ++c) {
        total += std::exp((cands[c].score - best) / params.tau);
        cumulative[c] = total;
      }
      const double u = uniform01(rng) * total;
      pick = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      pick = std::min(pick, cands.size() - 1);
    }

    const auto [i, j, score] = cands[pick];
    Component merged;
    merged.ids = comps[i].ids;
    merged.ids.insert(merged.ids.end(), comps[j].ids.begin(), comps[j].ids.end());
    std::sort(merged.ids.begin(), merged.ids.end());
    merged.part = detail::merge_parts(net, comps[i].part, comps[j].part,
                                      params.rank_size ? CostKind::Sst : CostKind::Dense)
                      .part;
    merged.tree_index = tree.add_merge(comps[i].tree_index, comps[j].tree_index);
    comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(j));
    comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(i));
    comps.insert(std::upper_bound(comps.begin(), comps.end(), merged, by_ids), std::move(merged));
  }
  tree.set_root(comps.front().tree_index);
  return tree;
}

ScheduleResult greedy_sample(const TensorNetwork& net, CostKind kind, const GreedyParams& params) {
  ScheduleResult r;
  r.tree = greedy_tree(net, params);
  r.report = tree_cost(net, r.tree, kind);
  return r;
}

ContractionTree random_tree(const TensorNetwork& net, std::mt19937_64& rng) {
  if (net.size() == 0) throw ContractViolation("empty network");
  if (!net.is_connected()) throw ContractViolation("network is disconnected");
  std::vector<std::size_t> order(net.edges().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto r = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(r, i - 1)]);
  }
  ContractionTree tree;
  std::vector<std::size_t> parent(net.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<int> subtree(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) subtree[i] = tree.add_leaf(net.nodes()[i].id);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e : order) {
    std::size_t a = find(net.index_of(net.edges()[e].a.node));
    std::size_t b = find(net.index_of(net.edges()[e].b.node));
    if (a == b) continue;
    if (rng() & 1) std::swap(a, b);
    parent[b] = a;
    subtree[a] = tree.add_merge(subtree[a], subtree[b]);
  }
  tree.set_root(subtree[find(0)]);
  return tree;
}

GreedyParams trial_params(std::uint64_t master_seed, std::size_t index, bool rank_size) {
  std::mt19937_64 rng(mix_seed(master_seed ^ mix_seed(static_cast<std::uint64_t>(index))));
  GreedyParams p;
  p.alpha = 2.0 * uniform01(rng);
  p.tau = std::pow(10.0, -2.0 + 2.0 * uniform01(rng));
  p.seed = rng();
  p.rank_size = rank_size;
  return p;
}

HyperGreedyResult hyper_greedy(const TensorNetwork& net, CostKind kind, const TrialBudget& budget,
                               std::uint64_t master_seed, unsigned threads, bool rank_size) {
  if (!budget.wall_clock && budget.trials == 0) throw ContractViolation("trial budget must be positive");
  if (budget.wall_clock && budget.wall_clock->count() <= 0) throw ContractViolation("wall-clock budget must be positive");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (!budget.wall_clock) threads = static_cast<unsigned>(std::min<std::size_t>(threads, budget.trials));

  const auto deadline = std::chrono::steady_clock::now() + budget.wall_clock.value_or(std::chrono::milliseconds(0));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::vector<TrialRecord> records;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      for (;;) {
        const std::size_t index = next.fetch_add(1);
        if (budget.wall_clock) {
          if (index > 0 && std::chrono::steady_clock::now() >= deadline) return;
        } else if (index >= budget.trials) {
          return;
        }
        TrialRecord rec;
        rec.index = index;
        rec.params = trial_params(master_seed, index, rank_size);
        auto r = greedy_sample(net, kind, rec.params);
        rec.tree = std::move(r.tree);
        rec.report = std::move(r.report);
        std::lock_guard lock(mu);
        records.push_back(std::move(rec));
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      next.store(std::numeric_limits<std::size_t>::max() / 2);
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  HyperGreedyResult out;
  out.deterministic = !budget.wall_clock;
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].report.total < records[best].report.total) best = i;
  }
  out.best_trial = records[best].index;
  out.best_tree = records[best].tree;
  out.best = records[best].report;
  out.trials = std::move(records);
  return out;
}

}  // namespace qlego
