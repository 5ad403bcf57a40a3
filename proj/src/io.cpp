#include "qlego/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "qlego/errors.hpp"

namespace qlego {

namespace {

std::string big_string(const BigInt& v) { return v.str(); }

// nlohmann reports type errors with its own exception; surface them as
// ParseError with the offending context.
template <class F>
auto parsing(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed " + what + ": " + e.what());
  } catch (const ContractViolation& e) {
    throw ParseError("malformed " + what + ": " + e.what());
  }
}

}  // namespace

Json network_to_json(const TensorNetwork& net) {
  Json nodes = Json::array();
  for (const auto& nd : net.nodes()) {
    const LegoBlock& b = nd.block;
    Json params = Json::object();
    if (b.kind == LegoKind::BitflipRep || b.kind == LegoKind::PhaseflipRep) params["arity"] = b.arity;
    bool default_roles = false;
    if (b.kind == LegoKind::Custom) {
      params["legs"] = b.num_legs();
      params["pcm"] = b.pcm.to_strings();
      if (!b.label.empty()) params["label"] = b.label;
    } else {
      default_roles = make_lego(b.kind, b.arity).leg_roles == b.leg_roles;
    }
    if (!default_roles) {
      Json roles = Json::array();
      for (LegRole r : b.leg_roles) roles.push_back(role_name(r));
      params["roles"] = roles;
    }
    nodes.push_back({{"id", nd.id}, {"kind", kind_name(b.kind)}, {"params", params}});
  }
  Json edges = Json::array();
  for (const auto& e : net.edges()) {
    edges.push_back(Json::array({{{"node", e.a.node}, {"leg", e.a.leg}}, {{"node", e.b.node}, {"leg", e.b.leg}}}));
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

TensorNetwork network_from_json(const Json& j) {
  return parsing("network JSON", [&] {
    TensorNetwork net;
    for (const auto& nd : j.at("nodes")) {
      const LegoKind kind = parse_kind(nd.at("kind").get<std::string>());
      const Json params = nd.value("params", Json::object());
      LegoBlock b;
      if (kind == LegoKind::Custom) {
        ParityCheckMatrix h(params.at("legs").get<std::size_t>());
        for (const auto& row : params.at("pcm")) {
          const auto s = row.get<std::string>();
          if (s.size() != h.num_legs()) throw ParseError("custom node row '" + s + "' has the wrong length");
          h.append_row(PauliOp::from_string(s));
        }
        b = make_custom_lego(std::move(h), {}, params.value("label", std::string{}));
      } else {
        b = make_lego(kind, params.value("arity", 0));
      }
      if (params.contains("roles")) {
        std::vector<LegRole> roles;
        for (const auto& r : params.at("roles")) roles.push_back(parse_role(r.get<std::string>()));
        if (roles.size() != b.num_legs()) throw ParseError("node roles do not match its leg count");
        b.leg_roles = std::move(roles);
      }
      const int id = nd.at("id").get<int>();
      if (net.contains(id)) throw ParseError("duplicate node id " + std::to_string(id));
      net.add_node(id, std::move(b));
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair of leg references");
      auto leg = [](const Json& r) { return LegRef{r.at("node").get<int>(), r.at("leg").get<std::size_t>()}; };
      const LegRef a = leg(e[0]), b = leg(e[1]);
      if (!net.contains(a.node) || !net.contains(b.node)) throw ParseError("edge refers to an unknown node");
      try {
        net.connect(a, b);
      } catch (const ContractViolation& err) {
        throw ParseError(std::string("invalid edge: ") + err.what());
      }
    }
    return net;
  });
}

Json tree_to_json(const ContractionTree& tree) {
  if (tree.empty()) return Json::array();
  auto rec = [&](auto&& self, int index) -> Json {
    const auto& nd = tree.nodes()[static_cast<std::size_t>(index)];
    if (nd.leaf >= 0) return nd.leaf;
    return Json::array({self(self, nd.left), self(self, nd.right)});
  };
  return rec(rec, tree.root());
}

ContractionTree tree_from_json(const Json& j) {
  ContractionTree tree;
  auto rec = [&](auto&& self, const Json& v) -> int {
    if (v.is_number_integer()) return tree.add_leaf(v.get<int>());
    if (!v.is_array() || v.size() != 2) throw ParseError("tree JSON: expected a node id or a pair, got " + v.dump());
    const int l = self(self, v[0]);
    const int r = self(self, v[1]);
    return tree.add_merge(l, r);
  };
  tree.set_root(rec(rec, j));
  return tree;
}

Json wep_to_json(const WeightPolynomial& p, std::size_t n, std::size_t k) {
  Json coeffs = Json::object();
  const auto cs = p.coeffs();
  for (std::size_t d = 0; d < cs.size(); ++d) {
    if (cs[d] == 0) continue;
    // Coefficients past 2^63 are written as strings.
    if (cs[d] <= BigInt(std::numeric_limits<std::int64_t>::max())) {
      coeffs[std::to_string(d)] = static_cast<std::int64_t>(cs[d]);
    } else {
      coeffs[std::to_string(d)] = big_string(cs[d]);
    }
  }
  return {{"coeffs", coeffs}, {"n", n}, {"k", k}, {"poly", p.to_string()}};
}

WeightPolynomial wep_from_json(const Json& j) {
  return parsing("WEP JSON", [&] {
    WeightPolynomial p;
    for (const auto& [deg, c] : j.at("coeffs").items()) {
      std::size_t d = 0;
      try {
        d = std::stoul(deg);
      } catch (const std::exception&) {
        throw ParseError("WEP JSON: bad degree '" + deg + "'");
      }
      BigInt v = c.is_string() ? BigInt(c.get<std::string>()) : BigInt(c.get<std::int64_t>());
      if (v < 0) throw ParseError("WEP JSON: negative coefficient at degree " + deg);
      p.add_monomial(d, v);
    }
    return p;
  });
}

Json cost_report_to_json(const CostReport& r) {
  Json merges = Json::array();
  for (const auto& m : r.merges) {
    merges.push_back({{"tree_node", m.tree_node},
                      {"left_legs", m.left_legs},
                      {"right_legs", m.right_legs},
                      {"left_rank", m.left_rank},
                      {"right_rank", m.right_rank},
                      {"stacked_rank", m.stacked_rank},
                      {"log2_cost", m.log2_cost},
                      {"cost", big_string(m.cost())}});
  }
  return {{"cost_kind", cost_kind_name(r.kind)}, {"total", big_string(r.total)}, {"merges", merges}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << text;
}

}  // namespace qlego
