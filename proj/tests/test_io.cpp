#include <doctest.h>

#include "qlego/errors.hpp"
#include "qlego/experiments.hpp"
#include "qlego/io.hpp"

using namespace qlego;

namespace {

std::vector<std::pair<std::string, TensorNetwork>> layouts() {
  const auto steane = ingest_code_file(QLEGO_DATA_DIR "/steane7.pcm");
  return {{"concat", layout_concat_rep(3, 2)},
          {"rsc", layout_rsc(3, 3)},
          {"happy", layout_happy(1)},
          {"msp", layout_msp(steane)},
          {"tanner", layout_tanner(steane)},
          {"msp absorbed", absorb_stoppers(layout_msp(steane))}};
}

}  // namespace

TEST_CASE("network JSON round-trips") {
  for (const auto& [name, net] : layouts()) {
    INFO(name);
    const Json j = network_to_json(net);
    const TensorNetwork back = network_from_json(Json::parse(j.dump()));
    CHECK(network_to_json(back) == j);
    REQUIRE(back.size() == net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
      CHECK(back.nodes()[i].id == net.nodes()[i].id);
      CHECK(back.nodes()[i].block.pcm == net.nodes()[i].block.pcm);
      CHECK(back.nodes()[i].block.leg_roles == net.nodes()[i].block.leg_roles);
    }
    CHECK(back.dangling() == net.dangling());
    CHECK(row_space_equal(network_pcm(back), network_pcm(net)));
  }
}

TEST_CASE("malformed network JSON is a parse error") {
  CHECK_THROWS_AS(network_from_json(Json::parse(R"({"nodes": [{"id": 0, "kind": "blob"}], "edges": []})")),
                  ParseError);
  CHECK_THROWS_AS(network_from_json(Json::parse(R"({"nodes": [], "edges": [[{"node": 0, "leg": 0}]]})")),
                  ParseError);
  CHECK_THROWS_AS(network_from_json(Json::parse(R"({"edges": []})")), ParseError);
  const char* reused = R"({"nodes": [{"id": 0, "kind": "bell"}, {"id": 1, "kind": "bell"}],
      "edges": [[{"node": 0, "leg": 1}, {"node": 1, "leg": 0}], [{"node": 0, "leg": 1}, {"node": 1, "leg": 1}]]})";
  CHECK_THROWS_AS(network_from_json(Json::parse(reused)), ParseError);
  const char* arity = R"({"nodes": [{"id": 0, "kind": "bitflip_rep", "params": {"arity": 1}}], "edges": []})";
  CHECK_THROWS_AS(network_from_json(Json::parse(arity)), ParseError);
  const char* dup = R"({"nodes": [{"id": 0, "kind": "bell"}, {"id": 0, "kind": "bell"}], "edges": []})";
  CHECK_THROWS_AS(network_from_json(Json::parse(dup)), ParseError);
}

TEST_CASE("tree JSON round-trips") {
  std::mt19937_64 rng(8);
  const auto net = layout_rsc(3, 3);
  for (int t = 0; t < 10; ++t) {
    const auto tree = random_tree(net, rng);
    const auto back = tree_from_json(Json::parse(tree_to_json(tree).dump()));
    CHECK(back == tree);
    CHECK(tree_to_json(tree).dump() == tree.to_string());
  }
  CHECK(tree_from_json(Json::parse("[[0,1],2]")).to_string() == "[[0,1],2]");
  CHECK(tree_from_json(Json::parse("4")).to_string() == "4");
  CHECK_THROWS_AS(tree_from_json(Json::parse("[0,1,2]")), ParseError);
  CHECK_THROWS_AS(tree_from_json(Json::parse(R"([0,"a"])")), ParseError);
}

TEST_CASE("WEP JSON round-trips, including wide coefficients") {
  const auto a = WeightPolynomial::from_terms({{0, 1}, {4, 15}});
  const Json j = wep_to_json(a, 5, 1);
  CHECK(j["coeffs"]["0"] == 1);
  CHECK(j["coeffs"]["4"] == 15);
  CHECK(j["n"] == 5);
  CHECK(j["poly"] == "1 + 15z^4");
  CHECK(wep_from_json(j) == a);
  const BigInt huge = BigInt(1) << 90;
  const auto big = WeightPolynomial::from_terms({{0, 1}, {3, huge}});
  CHECK(wep_from_json(Json::parse(wep_to_json(big, 3, 0).dump())) == big);
  CHECK_THROWS_AS(wep_from_json(Json::parse(R"({"coeffs": {"x": 1}})")), ParseError);
}

TEST_CASE("cost report JSON lists every merge") {
  const auto net = absorb_stoppers(layout_rsc(3, 3));
  const auto r = optimal_tree(net, CostKind::Sst);
  const Json j = cost_report_to_json(r.report);
  CHECK(j["cost_kind"] == "sst");
  CHECK(j["merges"].size() == net.size() - 1);
  BigInt sum = 0;
  for (const auto& m : j["merges"]) sum += BigInt(m["cost"].get<std::string>());
  CHECK(sum == BigInt(j["total"].get<std::string>()));
}

TEST_CASE("geometric statistics") {
  const auto s = geometric_stats({BigInt(1), BigInt(100)});
  CHECK(s.geo_mean == doctest::Approx(10));
  CHECK(s.geo_std == doctest::Approx(10));
  const auto flat = geometric_stats({BigInt(7), BigInt(7), BigInt(7)});
  CHECK(flat.geo_mean == doctest::Approx(7));
  CHECK(flat.geo_std == doctest::Approx(1));
}

TEST_CASE("cost-function comparison is deterministic and SST never loses") {
  const auto net = absorb_stoppers(layout_rsc(3, 3));
  CompareOptions o;
  o.budget.trials = 12;
  o.reps = 4;
  o.seed = 5;
  o.verify = true;
  const auto a = compare_cost_functions(net, "rsc33", 9, 1, o);
  o.threads = 1;
  const auto b = compare_cost_functions(net, "rsc33", 9, 1, o);
  CHECK(compare_csv(a, false) == compare_csv(b, false));
  REQUIRE(a.rows.size() == 8);
  for (std::size_t rep = 0; rep < 4; ++rep) {
    const auto& dense = a.rows[2 * rep];
    const auto& sst = a.rows[2 * rep + 1];
    CHECK(dense.kind == CostKind::Dense);
    CHECK(sst.kind == CostKind::Sst);
    CHECK(dense.seed == sst.seed);
    // Both searches see the same trees and SST cost is the true cost.
    CHECK(sst.true_cost <= dense.true_cost);
  }
  CHECK(a.improvement >= 1.0);
  CHECK(a.crossover.brute_force_cost == 256);
}

TEST_CASE("density profiles") {
  TensorNetwork single;
  single.add_node(make_lego(LegoKind::Enc603));
  const auto p = density_profile(contract_network(single, ContractionTree::single(0)));
  REQUIRE(p.records.size() == 1);
  CHECK(p.mean == doctest::Approx(1.0));

  const auto net = absorb_stoppers(layout_rsc(3, 3));
  const auto tree = optimal_tree(net, CostKind::Sst).tree;
  const auto r = contract_network(net, tree);
  const auto prof = density_profile(r);
  CHECK(prof.records.size() == r.density.size() - 1);
  for (const auto& rec : prof.records) {
    CHECK(rec.open_leg_count > 0);
    CHECK(rec.density() > 0);
    CHECK(rec.density() <= 1);
  }
  const auto csv = density_csv(prof);
  CHECK(csv.rfind("step,open_legs,nnz,density,ratio\n", 0) == 0);
}
