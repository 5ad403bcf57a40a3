#include "qlego/network.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "qlego/errors.hpp"

namespace qlego {

namespace {

std::string leg_text(LegRef r) {
  return "(" + std::to_string(r.node) + "," + std::to_string(r.leg) + ")";
}

}  // namespace

int TensorNetwork::add_node(LegoBlock block) {
  const int id = next_id_;
  add_node(id, std::move(block));
  return id;
}

void TensorNetwork::add_node(int id, LegoBlock block) {
  if (contains(id)) throw ContractViolation("duplicate node id " + std::to_string(id));
  links_.emplace_back(block.num_legs());
  nodes_.push_back({id, std::move(block)});
  next_id_ = std::max(next_id_, id + 1);
}

void TensorNetwork::connect(LegRef a, LegRef b) {
  if (a.node == b.node) {
    throw ContractViolation("edge " + leg_text(a) + "-" + leg_text(b) + " joins a node to itself");
  }
  const std::size_t ia = index_of(a.node);
  const std::size_t ib = index_of(b.node);
  for (auto [idx, r] : {std::pair{ia, a}, std::pair{ib, b}}) {
    if (r.leg >= links_[idx].size()) throw ContractViolation("no such leg " + leg_text(r));
    if (links_[idx][r.leg]) throw ContractViolation("leg " + leg_text(r) + " is already connected");
  }
  links_[ia][a.leg] = b;
  links_[ib][b.leg] = a;
  edges_.push_back({a, b});
}

bool TensorNetwork::contains(int id) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [id](const NetworkNode& n) { return n.id == id; });
}

std::size_t TensorNetwork::index_of(int id) const {
  // Ids are usually dense and in order.
  if (id >= 0 && static_cast<std::size_t>(id) < nodes_.size() && nodes_[static_cast<std::size_t>(id)].id == id) {
    return static_cast<std::size_t>(id);
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  throw ContractViolation("no node with id " + std::to_string(id));
}

std::optional<LegRef> TensorNetwork::partner(LegRef leg) const {
  const auto& l = links_[index_of(leg.node)];
  if (leg.leg >= l.size()) throw ContractViolation("no such leg " + leg_text(leg));
  return l[leg.leg];
}

std::vector<LegRef> TensorNetwork::dangling() const {
  std::vector<LegRef> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t l = 0; l < links_[i].size(); ++l) {
      if (!links_[i][l]) out.push_back({nodes_[i].id, l});
    }
  }
  return out;
}

std::vector<LegRef> TensorNetwork::physical_dangling() const {
  std::vector<LegRef> out;
  for (const LegRef& r : dangling()) {
    if (node(r.node).block.leg_roles[r.leg] == LegRole::Physical) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> TensorNetwork::edge_legs(int id) const {
  std::vector<std::size_t> out;
  const auto& l = links_[index_of(id)];
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i]) out.push_back(i);
  }
  return out;
}

std::vector<int> TensorNetwork::neighbors(int id) const {
  std::vector<std::size_t> idx;
  for (const auto& p : links_[index_of(id)]) {
    if (p) idx.push_back(index_of(p->node));
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<int> out;
  for (std::size_t i : idx) out.push_back(nodes_[i].id);
  return out;
}

std::vector<std::vector<int>> TensorNetwork::components() const {
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges_) {
    const std::size_t a = find(index_of(e.a.node));
    const std::size_t b = find(index_of(e.b.node));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::vector<int>> groups;
  for (std::size_t i = 0; i < nodes_.size(); ++i) groups[find(i)].push_back(nodes_[i].id);
  std::vector<std::vector<int>> out;
  for (auto& [root, ids] : groups) out.push_back(std::move(ids));
  return out;
}

bool TensorNetwork::is_connected() const { return components().size() <= 1; }

CodeSpec make_code(ParityCheckMatrix pcm, std::string name) {
  for (std::size_t i = 0; i < pcm.num_rows(); ++i) {
    for (std::size_t j = i + 1; j < pcm.num_rows(); ++j) {
      if (!commutes(pcm.row(i), pcm.row(j))) {
        throw InvalidInputError("stabilizer rows " + std::to_string(i) + " and " + std::to_string(j) +
                                " anticommute");
      }
    }
  }
  CodeSpec c;
  c.n = pcm.num_legs();
  c.k = c.n - rank(pcm);
  c.pcm = std::move(pcm);
  c.name = std::move(name);
  return c;
}

namespace {

struct Fold {
  ParityCheckMatrix pcm;
  std::vector<LegRef> legs;
};

// Tensors nodes in `order` one at a time and traces every edge whose ends
// are both inside the folded set. Edges leaving the set stay open.
Fold fold_nodes(const TensorNetwork& net, std::span<const int> order) {
  std::vector<bool> inside(net.size(), false);
  for (int id : order) inside[net.index_of(id)] = true;
  Fold f;
  f.pcm = ParityCheckMatrix(0);
  std::vector<bool> added(net.size(), false);
  for (int id : order) {
    const std::size_t idx = net.index_of(id);
    const NetworkNode& nd = net.nodes()[idx];
    const std::size_t base = f.legs.size();
    f.pcm = tensor_product(f.pcm, nd.block.pcm);
    for (std::size_t l = 0; l < nd.block.num_legs(); ++l) f.legs.push_back({id, l});
    added[idx] = true;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t l = 0; l < nd.block.num_legs(); ++l) {
      const auto p = net.partner({id, l});
      if (!p || !added[net.index_of(p->node)]) continue;
      const auto it = std::find(f.legs.begin(), f.legs.begin() + static_cast<std::ptrdiff_t>(base), *p);
      pairs.emplace_back(static_cast<std::size_t>(it - f.legs.begin()), base + l);
    }
    if (pairs.empty()) {
      f.pcm = reduced(f.pcm);
      continue;
    }
    f.pcm = self_trace(f.pcm, pairs);
    std::vector<bool> gone(f.legs.size(), false);
    for (auto [a, b] : pairs) gone[a] = gone[b] = true;
    std::vector<LegRef> kept;
    for (std::size_t i = 0; i < f.legs.size(); ++i) {
      if (!gone[i]) kept.push_back(f.legs[i]);
    }
    f.legs = std::move(kept);
  }
  return f;
}

// Permutes the fold's legs into canonical order (node order, leg index).
Fold canonical(const TensorNetwork& net, Fold f) {
  std::vector<std::size_t> perm(f.legs.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  auto key = [&](std::size_t i) { return std::pair{net.index_of(f.legs[i].node), f.legs[i].leg}; };
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  Fold out;
  out.pcm = reduced(restrict_to(f.pcm, perm));
  for (std::size_t i : perm) out.legs.push_back(f.legs[i]);
  return out;
}

void require_connected(const TensorNetwork& net) {
  if (net.size() == 0) throw ContractViolation("network has no nodes");
  const auto comps = net.components();
  if (comps.size() > 1) {
    throw ContractViolation("network is disconnected: " + std::to_string(comps.size()) +
                            " components, second one starts at node " + std::to_string(comps[1].front()));
  }
}

}  // namespace

ParityCheckMatrix network_pcm(const TensorNetwork& net) {
  std::vector<int> order;
  for (const auto& n : net.nodes()) order.push_back(n.id);
  return network_pcm(net, order);
}

ParityCheckMatrix network_pcm(const TensorNetwork& net, std::span<const int> fold_order) {
  require_connected(net);
  std::vector<int> sorted(fold_order.begin(), fold_order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> all;
  for (const auto& n : net.nodes()) all.push_back(n.id);
  std::sort(all.begin(), all.end());
  if (sorted != all) throw ContractViolation("fold order is not a permutation of the node ids");
  return canonical(net, fold_nodes(net, fold_order)).pcm;
}

TensorNetwork fuse_groups(const TensorNetwork& net, const std::vector<std::vector<int>>& groups) {
  std::vector<std::size_t> group_of(net.size(), groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw ContractViolation("empty fuse group");
    for (int id : groups[g]) {
      const std::size_t idx = net.index_of(id);
      if (group_of[idx] != groups.size()) {
        throw ContractViolation("node " + std::to_string(id) + " is in two fuse groups");
      }
      group_of[idx] = g;
    }
  }
  if (std::find(group_of.begin(), group_of.end(), groups.size()) != group_of.end()) {
    throw ContractViolation("fuse groups do not cover every node");
  }

  // Groups are emitted in the node order of their first member.
  std::vector<std::size_t> group_order;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (std::find(group_order.begin(), group_order.end(), group_of[i]) == group_order.end()) {
      group_order.push_back(group_of[i]);
    }
  }

  TensorNetwork out;
  std::map<LegRef, LegRef> moved;
  for (std::size_t g : group_order) {
    std::vector<int> members = groups[g];
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return net.index_of(a) < net.index_of(b); });
    const int new_id = members.front();
    if (members.size() == 1) {
      out.add_node(new_id, net.node(new_id).block);
      for (std::size_t l = 0; l < net.node(new_id).block.num_legs(); ++l) moved[{new_id, l}] = {new_id, l};
      continue;
    }
    Fold f = canonical(net, fold_nodes(net, members));
    std::vector<LegRole> roles;
    std::string label;
    for (int id : members) {
      if (!label.empty()) label += "+";
      label += net.node(id).block.kind == LegoKind::Custom && !net.node(id).block.label.empty()
                   ? net.node(id).block.label
                   : lego_name(net.node(id).block);
    }
    for (std::size_t i = 0; i < f.legs.size(); ++i) {
      roles.push_back(net.node(f.legs[i].node).block.leg_roles[f.legs[i].leg]);
      moved[f.legs[i]] = {new_id, i};
    }
    out.add_node(new_id, make_custom_lego(std::move(f.pcm), std::move(roles), std::move(label)));
  }
  for (const Edge& e : net.edges()) {
    if (group_of[net.index_of(e.a.node)] == group_of[net.index_of(e.b.node)]) continue;
    out.connect(moved.at(e.a), moved.at(e.b));
  }
  return out;
}

TensorNetwork absorb_stoppers(const TensorNetwork& net) {
  std::vector<std::vector<int>> groups;
  std::map<int, std::size_t> host_group;
  std::vector<int> pending;
  for (const auto& n : net.nodes()) {
    if (is_stopper(n.block.kind)) {
      const auto p = net.partner({n.id, 0});
      if (p && !is_stopper(net.node(p->node).block.kind)) {
        pending.push_back(n.id);
        continue;
      }
    }
    host_group[n.id] = groups.size();
    groups.push_back({n.id});
  }
  for (int s : pending) groups[host_group.at(net.partner({s, 0})->node)].push_back(s);
  return fuse_groups(net, groups);
}

Verification verify_network_code(const TensorNetwork& net, const CodeSpec& code) {
  const auto physical = net.physical_dangling();
  if (physical.size() != code.n) {
    return {false, "network has " + std::to_string(physical.size()) + " physical legs, code has n=" +
                       std::to_string(code.n)};
  }
  ParityCheckMatrix h;
  try {
    h = network_pcm(net);
  } catch (const ContractViolation& e) {
    return {false, e.what()};
  }
  const auto dangling = net.dangling();
  std::vector<std::size_t> keep;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < dangling.size(); ++i) {
    (net.node(dangling[i].node).block.leg_roles[dangling[i].leg] == LegRole::Physical ? keep : others)
        .push_back(i);
  }
  if (!others.empty()) {
    // Non-physical open legs (logical legs) must be traced out: keep only
    // the elements acting trivially on them.
    std::vector<std::size_t> order = keep;
    order.insert(order.end(), others.begin(), others.end());
    ParityCheckMatrix p = restrict_to(h, order);
    std::vector<BitColumn> cols;
    for (std::size_t i = keep.size(); i < order.size(); ++i) {
      cols.push_back({i, Part::X});
      cols.push_back({i, Part::Z});
    }
    Elimination e = gauss_eliminate(p, cols);
    std::size_t pivots = 0;
    for (const auto& piv : e.pivots) pivots += piv.has_value();
    ParityCheckMatrix stab(keep.size());
    std::vector<std::size_t> first(keep.size());
    std::iota(first.begin(), first.end(), std::size_t{0});
    ParityCheckMatrix tail = restrict_to(e.matrix, first);
    for (std::size_t r = pivots; r < tail.num_rows(); ++r) stab.append_row(tail.row(r));
    h = reduced(stab);
  }
  if (row_space_equal(h, code.pcm)) return {true, "stabilizer groups match"};
  std::ostringstream msg;
  msg << "stabilizer groups differ: network rank " << rank(h) << ", code rank " << rank(code.pcm);
  for (const PauliOp& r : reduced(code.pcm).rows()) {
    ParityCheckMatrix probe = h;
    probe.append_row(r);
    if (rank(probe) != rank(h)) {
      msg << "; code row " << r.to_string() << " is not produced by the network";
      break;
    }
  }
  return {false, msg.str()};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParityCheckMatrix parse_pcm_text(std::string_view text) {
  std::vector<PauliOp> rows;
  std::vector<std::size_t> line_of;
  std::size_t legs = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    PauliOp op;
    if (const auto bar = line.find('|'); bar != std::string_view::npos) {
      const auto xs = trim(line.substr(0, bar));
      const auto zs = trim(line.substr(bar + 1));
      if (xs.size() != zs.size()) throw ParseError(where + "x and z halves have different lengths");
      op = PauliOp(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if ((xs[i] != '0' && xs[i] != '1') || (zs[i] != '0' && zs[i] != '1')) {
          throw ParseError(where + "symplectic rows may only contain 0 and 1");
        }
        op.set(i, xs[i] == '1', zs[i] == '1');
      }
    } else {
      const auto bad = line.find_first_not_of("IXYZ");
      if (bad != std::string_view::npos) {
        throw ParseError(where + "unexpected character '" + std::string(1, line[bad]) + "'");
      }
      op = PauliOp::from_string(line);
    }
    if (rows.empty()) {
      legs = op.size();
    } else if (op.size() != legs) {
      throw ParseError(where + "row has " + std::to_string(op.size()) + " legs, expected " +
                       std::to_string(legs));
    }
    rows.push_back(std::move(op));
    line_of.push_back(line_no);
  }
  if (rows.empty()) throw ParseError("PCM text has no rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (!commutes(rows[i], rows[j])) {
        throw ParseError("rows on lines " + std::to_string(line_of[i]) + " and " + std::to_string(line_of[j]) +
                         " anticommute");
      }
    }
  }
  return ParityCheckMatrix::from_rows(legs, rows);
}

std::string format_pcm_text(const ParityCheckMatrix& h) {
  std::string out;
  for (const auto& s : h.to_strings()) out += s + "\n";
  return out;
}

CodeSpec ingest_code(std::string_view text, std::string name) {
  return make_code(parse_pcm_text(text), std::move(name));
}

CodeSpec ingest_code_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ingest_code(ss.str(), path.stem().string());
}

}  // namespace qlego
