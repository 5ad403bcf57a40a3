#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "qlego/errors.hpp"
#include "qlego/experiments.hpp"
#include "qlego/io.hpp"

using namespace qlego;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kInputError = 2, kResourceError = 3, kVerificationError = 4 };

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Options shared by the commands that search for trees.
struct SearchOptions {
  std::size_t trials = 64;
  double wall_seconds = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool rank_size = false;

  TrialBudget budget() const {
    TrialBudget b;
    b.trials = trials;
    if (wall_seconds > 0) b.wall_clock = std::chrono::milliseconds(static_cast<long long>(wall_seconds * 1000));
    return b;
  }
  bool deterministic() const { return wall_seconds <= 0; }
};

unsigned default_threads() {
  if (const char* env = std::getenv("QLEGO_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw InvalidInputError(std::string("QLEGO_THREADS is not a number: ") + env);
    }
  }
  return 0;
}

void add_search_flags(CLI::App* cmd, SearchOptions& o) {
  cmd->add_option("--trials", o.trials, "greedy trials")->check(CLI::PositiveNumber);
  cmd->add_option("--wall", o.wall_seconds, "wall-clock budget in seconds (nondeterministic)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads (0: QLEGO_THREADS or all cores)");
  cmd->add_flag("--rank-size", o.rank_size, "size tensors by group rank during greedy sampling");
}

struct Manifest {
  std::string command;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  bool deterministic = true;
  std::vector<std::string> inputs;
  std::string started = utc_now();

  Json to_json() const {
    Json files = Json::array();
    for (const auto& p : inputs) files.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    return {{"command", command},     {"parameters", parameters}, {"master_seed", seed},
            {"tool_version", kVersion}, {"inputs", files},        {"started_at", started},
            {"finished_at", utc_now()}, {"deterministic", deterministic}};
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

TensorNetwork load_network(const std::string& path, bool absorb) {
  TensorNetwork net = network_from_json(read_json_file(path));
  return absorb ? absorb_stoppers(net) : net;
}

// n, k of the code a network realizes. Logical legs must be capped.
std::pair<std::size_t, std::size_t> network_nk(const TensorNetwork& net) {
  for (const auto& l : net.dangling()) {
    if (net.node(l.node).block.leg_roles[l.leg] != LegRole::Physical) {
      throw InvalidInputError("network has an open non-physical leg (" + std::to_string(l.node) + "," +
                              std::to_string(l.leg) + "); cap logical legs with an id_stopper");
    }
  }
  const auto h = network_pcm(net);
  return {h.num_legs(), h.num_legs() - rank(h)};
}

Json enumerators_json(const WeightPolynomial& a, std::size_t n, std::size_t k) {
  const WeightPolynomial b = macwilliams_B(a, n, k);
  Json out{{"n", n}, {"k", k}, {"A", wep_to_json(a, n, k)}, {"B", wep_to_json(b, n, k)}};
  if (a == b) {
    out["distance"] = nullptr;
  } else {
    out["distance"] = distance(a, b);
  }
  return out;
}

std::string describe_distance(const Json& e) {
  return e["distance"].is_null() ? "none (stabilizer state)" : std::to_string(e["distance"].get<std::size_t>());
}

ScheduleResult search_tree(const TensorNetwork& net, const std::string& method, CostKind kind,
                           const SearchOptions& o) {
  if (method == "optimal") return optimal_tree(net, kind);
  const auto hg = hyper_greedy(net, kind, o.budget(), o.seed, o.threads, o.rank_size);
  return {hg.best_tree, hg.best};
}

int run(int argc, char** argv) {
  CLI::App app{"Quantum LEGO weight enumerators and contraction schedules"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // layout
  auto* layout = app.add_subcommand("layout", "generate a network layout");
  std::string kind, code_path, out_path;
  int rows = 3, cols = 3, dist = 3, layers = 2;
  bool absorb_layout = false;
  layout->add_option("kind", kind, "concat_rep | rsc | happy | msp | tanner")
      ->required()
      ->check(CLI::IsMember({"concat_rep", "rsc", "happy", "msp", "tanner"}));
  layout->add_option("--rows", rows);
  layout->add_option("--cols", cols);
  layout->add_option("--distance", dist);
  layout->add_option("--layers", layers, "concatenation levels, or HaPPY inflation rounds");
  layout->add_option("--code", code_path, "PCM text file for msp and tanner");
  layout->add_flag("--absorb", absorb_layout, "fold stoppers into their neighbours");
  layout->add_option("--out", out_path, "output file (default stdout)");

  // wep
  auto* wep = app.add_subcommand("wep", "weight enumerators, distance and costs");
  std::string net_path, tree_path, method, optimize = "greedy", cost = "sst";
  bool absorb = true;
  SearchOptions search;
  auto* net_opt = wep->add_option("--net", net_path, "network JSON");
  auto* code_opt = wep->add_option("--code", code_path, "PCM text file");
  net_opt->excludes(code_opt);
  wep->add_option("--method", method, "brute | contract")->check(CLI::IsMember({"brute", "contract"}));
  wep->add_option("--tree", tree_path, "contraction tree JSON");
  wep->add_option("--optimize", optimize, "optimal | greedy")->check(CLI::IsMember({"optimal", "greedy"}));
  wep->add_option("--cost", cost, "dense | sst")->check(CLI::IsMember({"dense", "sst"}));
  wep->add_flag("--absorb,!--no-absorb", absorb, "fold stoppers before contracting (default on)");
  wep->add_option("--out", out_path, "result JSON file");
  add_search_flags(wep, search);

  // optimize
  auto* opt = app.add_subcommand("optimize", "find a contraction tree");
  opt->add_option("--net", net_path, "network JSON")->required();
  opt->add_option("--method", optimize, "optimal | greedy")->check(CLI::IsMember({"optimal", "greedy"}));
  opt->add_option("--cost", cost, "dense | sst")->check(CLI::IsMember({"dense", "sst"}));
  opt->add_flag("--absorb,!--no-absorb", absorb, "fold stoppers first (default on)");
  opt->add_option("--out", out_path, "tree and cost report JSON");
  add_search_flags(opt, search);

  // compare
  auto* cmp = app.add_subcommand("compare", "dense versus SST cost under hyper-greedy search");
  std::string name, csv_path, summary_path;
  std::size_t reps = 20;
  bool timing = false, verify = false;
  cmp->add_option("--net", net_path, "network JSON")->required();
  cmp->add_option("--name", name, "network label in the CSV (default: file stem)");
  cmp->add_option("--reps", reps, "repetitions")->check(CLI::PositiveNumber);
  cmp->add_option("--csv", csv_path, "per-repetition CSV (default stdout)");
  cmp->add_option("--summary", summary_path, "summary JSON with manifest");
  cmp->add_flag("--timing", timing, "fill the wall_ms column");
  cmp->add_flag("--verify", verify, "contract each best tree and check its cost");
  cmp->add_flag("--absorb,!--no-absorb", absorb, "fold stoppers first (default on)");
  add_search_flags(cmp, search);

  // density
  auto* den = app.add_subcommand("density", "density of intermediate tensors");
  den->add_option("--net", net_path, "network JSON")->required();
  den->add_option("--tree", tree_path, "contraction tree JSON (default: best SST greedy tree)");
  den->add_option("--csv", csv_path, "CSV output (default stdout)");
  den->add_flag("--absorb,!--no-absorb", absorb, "fold stoppers first (default on)");
  add_search_flags(den, search);

  // crossover
  auto* cross = app.add_subcommand("crossover", "contraction versus brute-force enumeration");
  cross->add_option("--net", net_path, "network JSON")->required();
  cross->add_option("--out", out_path, "report JSON");
  cross->add_flag("--absorb,!--no-absorb", absorb, "fold stoppers first (default on)");
  add_search_flags(cross, search);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  if (search.threads == 0) search.threads = default_threads();

  Manifest manifest;
  manifest.seed = search.seed;
  manifest.deterministic = search.deterministic();
  for (const auto* opt_ : app.get_subcommands()[0]->get_options()) {
    if (opt_->count() > 0 && opt_->get_name() != "--help") {
      manifest.parameters[opt_->get_name()] = opt_->as<std::string>();
    }
  }

  if (layout->parsed()) {
    manifest.command = "layout";
    TensorNetwork net;
    std::optional<CodeSpec> code;
    if (kind == "concat_rep") {
      net = layout_concat_rep(dist, layers);
    } else if (kind == "rsc") {
      net = layout_rsc(rows, cols);
    } else if (kind == "happy") {
      net = layout_happy(layers);
    } else {
      if (code_path.empty()) throw InvalidInputError(kind + " layout needs --code");
      code = ingest_code_file(code_path);
      net = kind == "msp" ? layout_msp(*code) : layout_tanner(*code);
      const auto v = verify_network_code(net, *code);
      if (!v) throw VerificationError("generated network does not realize the code: " + v.message);
      std::cerr << "verified: " << v.message << "\n";
    }
    if (absorb_layout) net = absorb_stoppers(net);
    emit(out_path, network_to_json(net).dump(2) + "\n");
    std::cerr << kind << ": " << net.size() << " nodes, " << net.edges().size() << " edges, "
              << net.physical_dangling().size() << " physical legs\n";
    return kOk;
  }

  if (wep->parsed()) {
    manifest.command = "wep";
    if (net_path.empty() == code_path.empty()) throw InvalidInputError("wep needs exactly one of --net and --code");
    if (method.empty()) method = net_path.empty() ? "brute" : "contract";
    Json result;
    if (method == "brute") {
      ParityCheckMatrix h;
      if (!code_path.empty()) {
        manifest.inputs.push_back(code_path);
        h = ingest_code_file(code_path).pcm;
      } else {
        manifest.inputs.push_back(net_path);
        const auto net = load_network(net_path, false);
        network_nk(net);
        h = network_pcm(net);
      }
      const WeightPolynomial a = brute_force_wep(h);
      result = enumerators_json(a, h.num_legs(), h.num_legs() - rank(h));
      result["method"] = "brute";
      result["brute_force_cost"] = (BigInt(1) << rank(h)).str();
    } else {
      if (net_path.empty()) throw InvalidInputError("contraction needs --net; build one with `layout msp --code`");
      manifest.inputs.push_back(net_path);
      const auto net = load_network(net_path, absorb);
      const auto [n, k] = network_nk(net);
      const CostKind ck = parse_cost_kind(cost);
      ContractionTree tree;
      if (!tree_path.empty()) {
        manifest.inputs.push_back(tree_path);
        tree = tree_from_json(read_json_file(tree_path));
        validate_tree(net, tree);
      } else {
        tree = search_tree(net, optimize, ck, search).tree;
      }
      const auto contracted = contract_network(net, tree);
      const auto sst = sst_cost(net, tree);
      if (sst.total != contracted.true_cost) {
        throw VerificationError("SST cost " + sst.total.str() + " differs from counted multiplications " +
                                contracted.true_cost.str());
      }
      result = enumerators_json(contracted.A, n, k);
      result["method"] = "contract";
      result["tree"] = tree_to_json(tree);
      result["true_cost"] = contracted.true_cost.str();
      result["cost_report"] = cost_report_to_json(sst);
      result["dense_cost"] = dense_cost(net, tree).total.str();
      result["brute_force_cost"] = (BigInt(1) << (n - k)).str();
    }
    std::cout << "A(z) = " << result["A"]["poly"].get<std::string>() << "\n"
              << "B(z) = " << result["B"]["poly"].get<std::string>() << "\n"
              << "[[n,k]] = [[" << result["n"] << "," << result["k"] << "]], d = " << describe_distance(result)
              << "\n";
    if (result.contains("true_cost")) std::cout << "contraction cost = " << result["true_cost"].get<std::string>() << "\n";
    if (!out_path.empty()) write_text_file(out_path, Json{{"manifest", manifest.to_json()}, {"result", result}}.dump(2) + "\n");
    return kOk;
  }

  manifest.inputs.push_back(net_path);
  const auto net = load_network(net_path, absorb);

  if (opt->parsed()) {
    manifest.command = "optimize";
    const auto r = search_tree(net, optimize, parse_cost_kind(cost), search);
    std::cout << "tree " << r.tree.to_string() << "\n" << cost << " cost " << r.report.total << "\n";
    const Json result{{"tree", tree_to_json(r.tree)}, {"cost_report", cost_report_to_json(r.report)}};
    if (!out_path.empty()) write_text_file(out_path, Json{{"manifest", manifest.to_json()}, {"result", result}}.dump(2) + "\n");
    return kOk;
  }

  if (cmp->parsed()) {
    manifest.command = "compare";
    const auto [n, k] = network_nk(net);
    CompareOptions o;
    o.budget = search.budget();
    o.reps = reps;
    o.seed = search.seed;
    o.threads = search.threads;
    o.rank_size = search.rank_size;
    o.verify = verify;
    o.timing = timing;
    if (name.empty()) name = std::filesystem::path(net_path).stem().string();
    const auto r = compare_cost_functions(net, name, n, k, o);
    emit(csv_path, compare_csv(r, timing));
    const Json summary{{"network", name},
                       {"dense", {{"geo_mean", r.dense.geo_mean}, {"geo_std", r.dense.geo_std}}},
                       {"sst", {{"geo_mean", r.sst.geo_mean}, {"geo_std", r.sst.geo_std}}},
                       {"improvement_factor", r.improvement},
                       {"best_sst_cost", r.crossover.contraction_cost.str()},
                       {"brute_force_cost", r.crossover.brute_force_cost.str()},
                       {"brute_force_wins", r.crossover.brute_force_wins}};
    if (!summary_path.empty()) {
      write_text_file(summary_path, Json{{"manifest", manifest.to_json()}, {"summary", summary}}.dump(2) + "\n");
    }
    std::cerr << std::setprecision(4) << name << ": dense geo-mean " << r.dense.geo_mean << ", sst geo-mean "
              << r.sst.geo_mean << ", improvement " << r.improvement << ", brute force 2^" << n - k
              << (r.crossover.brute_force_wins ? " wins\n" : " loses\n");
    return kOk;
  }

  if (den->parsed()) {
    manifest.command = "density";
    ContractionTree tree;
    if (!tree_path.empty()) {
      tree = tree_from_json(read_json_file(tree_path));
    } else {
      tree = hyper_greedy(net, CostKind::Sst, search.budget(), search.seed, search.threads, search.rank_size).best_tree;
    }
    const auto p = density_profile(contract_network(net, tree));
    emit(csv_path, density_csv(p));
    std::cerr << "mean density " << p.mean << " over " << p.records.size() << " intermediate tensors\n";
    return kOk;
  }

  if (cross->parsed()) {
    manifest.command = "crossover";
    const auto [n, k] = network_nk(net);
    const auto hg = hyper_greedy(net, CostKind::Sst, search.budget(), search.seed, search.threads, search.rank_size);
    const auto r = brute_force_crossover(hg.best.total, n, k);
    const Json result{{"contraction_cost", r.contraction_cost.str()},
                      {"brute_force_cost", r.brute_force_cost.str()},
                      {"winner", r.brute_force_wins ? "brute_force" : "contraction"},
                      {"ratio", r.ratio},
                      {"tree", tree_to_json(hg.best_tree)}};
    std::cout << "contraction " << r.contraction_cost << " vs brute force " << r.brute_force_cost << ": "
              << (r.brute_force_wins ? "brute force" : "contraction") << " wins (ratio " << r.ratio << ")\n";
    if (!out_path.empty()) write_text_file(out_path, Json{{"manifest", manifest.to_json()}, {"result", result}}.dump(2) + "\n");
    return kOk;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceError;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerificationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
