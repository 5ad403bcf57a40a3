#include <algorithm>
#include <array>
#include <map>

#include "qlego/errors.hpp"
#include "qlego/network.hpp"

namespace qlego {

namespace {

int cap(TensorNetwork& net, LegoKind stopper, LegRef leg) {
  const int s = net.add_node(make_lego(stopper));
  net.connect({s, 0}, leg);
  return s;
}

}  // namespace

TensorNetwork layout_concat_rep(int distance, int layers) {
  if (distance < 2) throw InvalidInputError("concatenated repetition code needs distance >= 2");
  if (layers < 1) throw InvalidInputError("concatenated repetition code needs at least one layer");
  const auto d = static_cast<std::size_t>(distance);
  auto block_for = [&](int level) {
    LegoBlock b = make_lego(level % 2 == 1 ? LegoKind::PhaseflipRep : LegoKind::BitflipRep, distance + 1);
    b.leg_roles.back() = LegRole::Logical;
    return b;
  };
  TensorNetwork net;
  std::vector<int> frontier{net.add_node(block_for(1))};
  for (int level = 2; level <= layers; ++level) {
    std::vector<int> next;
    for (int parent : frontier) {
      for (std::size_t j = 0; j < d; ++j) {
        const int child = net.add_node(block_for(level));
        net.connect({parent, j}, {child, d});
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  cap(net, LegoKind::IdStopper, {0, d});
  return net;
}

TensorNetwork layout_rsc(int rows, int cols) {
  if (rows < 2 || cols < 2) throw InvalidInputError("rotated surface code needs at least 2x2 qubits");
  // Leg slots per orientation. Orientation A applies when the face to the
  // north-east of the qubit is X-type.
  struct Slots {
    std::size_t n, e, s, w;
  };
  constexpr Slots kA{1, 0, 2, 3};
  constexpr Slots kB{0, 2, 3, 1};
  auto slots = [](int i, int j) { return (i + j + 1) % 2 == 0 ? kA : kB; };
  auto id = [cols](int i, int j) { return i * cols + j; };

  TensorNetwork net;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      LegoBlock b = make_lego(LegoKind::Enc603);
      b.leg_roles = {LegRole::Ancilla, LegRole::Ancilla, LegRole::Ancilla, LegRole::Ancilla,
                     LegRole::Physical, LegRole::Logical};
      net.add_node(std::move(b));
    }
  }
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j + 1 < cols) net.connect({id(i, j), slots(i, j).e}, {id(i, j + 1), slots(i, j + 1).w});
      if (i + 1 < rows) net.connect({id(i, j), slots(i, j).s}, {id(i + 1, j), slots(i + 1, j).n});
    }
  }
  for (int q = 0; q < rows * cols; ++q) cap(net, LegoKind::IdStopper, {q, 5});
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const Slots s = slots(i, j);
      if (i == 0) cap(net, LegoKind::XStopper, {id(i, j), s.n});
      if (i == rows - 1) cap(net, LegoKind::XStopper, {id(i, j), s.s});
      if (j == 0) cap(net, LegoKind::ZStopper, {id(i, j), s.w});
      if (j == cols - 1) cap(net, LegoKind::ZStopper, {id(i, j), s.e});
    }
  }
  return net;
}

ParityCheckMatrix rotated_surface_code_pcm(int rows, int cols) {
  const auto n = static_cast<std::size_t>(rows * cols);
  ParityCheckMatrix h(n);
  // Faces sit on the (rows+1) x (cols+1) grid of corners; face (r, c)
  // touches qubits (r-1..r, c-1..c) that exist.
  for (int r = 0; r <= rows; ++r) {
    for (int c = 0; c <= cols; ++c) {
      const bool x_type = (r + c) % 2 == 0;
      const bool top_bottom = r == 0 || r == rows;
      const bool left_right = c == 0 || c == cols;
      if (top_bottom && left_right) continue;
      if (top_bottom && !x_type) continue;
      if (left_right && x_type) continue;
      PauliOp p(n);
      for (int i = r - 1; i <= r; ++i) {
        for (int j = c - 1; j <= c; ++j) {
          if (i < 0 || j < 0 || i >= rows || j >= cols) continue;
          p.set(static_cast<std::size_t>(i * cols + j), x_type, !x_type);
        }
      }
      h.append_row(p);
    }
  }
  return h;
}

TensorNetwork layout_happy(int layers) {
  if (layers < 0) throw InvalidInputError("HaPPY layout needs layers >= 0");
  // Grow a {5,4} tiling by vertex inflation. Tiles list their vertices in
  // cyclic order; leg j of a tile is the edge (v[j], v[j+1]).
  std::vector<std::array<int, 5>> tiles{{0, 1, 2, 3, 4}};
  std::vector<int> boundary{0, 1, 2, 3, 4};
  std::map<int, int> tiles_at;  // vertex -> number of tiles touching it
  for (int v : boundary) tiles_at[v] = 1;
  int next_vertex = 5;

  for (int layer = 0; layer < layers; ++layer) {
    const std::size_t m = boundary.size();
    // radiating[i] runs from the side of edge (v[i-1], v[i]) to the side of
    // edge (v[i], v[i+1]).
    std::vector<std::vector<int>> radiating(m);
    for (std::size_t i = 0; i < m; ++i) {
      const int k = 4 - tiles_at[boundary[i]];
      if (k < 2) throw ContractViolation("HaPPY growth hit a boundary vertex with too many tiles");
      for (int r = 0; r < k - 1; ++r) radiating[i].push_back(next_vertex++);
    }
    std::vector<int> next_boundary;
    std::map<int, int> next_tiles_at;
    for (std::size_t i = 0; i < m; ++i) {
      const int v = boundary[i];
      const auto& rad = radiating[i];
      next_boundary.push_back(rad.front());
      next_tiles_at[rad.front()] = 2;
      for (std::size_t r = 0; r + 1 < rad.size(); ++r) {
        const int y1 = next_vertex++;
        const int y2 = next_vertex++;
        tiles.push_back({v, rad[r], y1, y2, rad[r + 1]});
        for (int y : {y1, y2, rad[r + 1]}) next_boundary.push_back(y);
        next_tiles_at[y1] = next_tiles_at[y2] = 1;
        next_tiles_at[rad[r + 1]] = 2;
      }
      const std::size_t j = (i + 1) % m;
      const int x = next_vertex++;
      tiles.push_back({v, boundary[j], radiating[j].front(), x, rad.back()});
      next_boundary.push_back(x);
      next_tiles_at[x] = 1;
    }
    boundary = std::move(next_boundary);
    tiles_at = std::move(next_tiles_at);
  }

  TensorNetwork net;
  std::map<std::pair<int, int>, LegRef> open_edges;
  for (const auto& t : tiles) {
    const int node = net.add_node(make_lego(LegoKind::Sub513));
    for (std::size_t j = 0; j < 5; ++j) {
      const int a = t[j];
      const int b = t[(j + 1) % 5];
      const std::pair key{std::min(a, b), std::max(a, b)};
      if (auto it = open_edges.find(key); it != open_edges.end()) {
        net.connect(it->second, {node, j});
        open_edges.erase(it);
      } else {
        open_edges[key] = {node, j};
      }
    }
  }
  return net;
}

namespace {

struct Coupling {
  std::size_t generator;
  char op;  // 'X' or 'Z'
};

std::vector<std::vector<Coupling>> couplings_by_qubit(const CodeSpec& code) {
  std::vector<std::vector<Coupling>> out(code.n);
  for (std::size_t g = 0; g < code.pcm.num_rows(); ++g) {
    const PauliOp row = code.pcm.row(g);
    for (std::size_t q = 0; q < code.n; ++q) {
      const char c = row.symbol(q);
      if (c == 'I') continue;
      if (c == 'Y') {
        throw InvalidInputError("generator " + std::to_string(g) + " has a Y on qubit " + std::to_string(q) +
                                "; only X and Z entries are supported");
      }
      out[q].push_back({g, c});
    }
  }
  return out;
}

std::vector<std::size_t> support(const PauliOp& row) {
  std::vector<std::size_t> s;
  for (std::size_t q = 0; q < row.size(); ++q) {
    if (row.symbol(q) != 'I') s.push_back(q);
  }
  return s;
}

template <typename T>
std::size_t position(const std::vector<T>& v, const T& x) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

// One qubit line: ID stopper, a chain of 3-leg spiders (in, out, coupling)
// and the final out leg as the physical qubit. Z couplings pass through a
// Hadamard. Returns the coupling legs in chain order and the physical leg.
struct Line {
  std::vector<LegRef> couplings;
  LegRef physical;
};

Line build_line(TensorNetwork& net, const std::vector<Coupling>& cs) {
  Line line;
  if (cs.empty()) {
    const int b = net.add_node(make_lego(LegoKind::Bell));
    cap(net, LegoKind::IdStopper, {b, 0});
    line.physical = {b, 1};
    return line;
  }
  const int stop = net.add_node(make_lego(LegoKind::IdStopper));
  LegRef prev{stop, 0};
  for (const Coupling& c : cs) {
    LegoBlock spider = make_lego(c.op == 'X' ? LegoKind::PhaseflipRep : LegoKind::BitflipRep, 3);
    spider.leg_roles = {LegRole::Physical, LegRole::Physical, LegRole::Ancilla};
    const int s = net.add_node(std::move(spider));
    net.connect(prev, {s, 0});
    if (c.op == 'X') {
      line.couplings.push_back({s, 2});
    } else {
      LegoBlock hb = make_lego(LegoKind::Hadamard);
      hb.leg_roles = {LegRole::Ancilla, LegRole::Ancilla};
      const int h = net.add_node(std::move(hb));
      net.connect({h, 1}, {s, 2});
      line.couplings.push_back({h, 0});
    }
    prev = {s, 1};
  }
  line.physical = prev;
  return line;
}

LegoBlock ancilla_spider(std::size_t legs) {
  LegoBlock b = make_lego(LegoKind::BitflipRep, static_cast<int>(legs));
  b.leg_roles.assign(legs, LegRole::Ancilla);
  return b;
}

}  // namespace

TensorNetwork layout_msp(const CodeSpec& code) {
  const auto lines = couplings_by_qubit(code);
  TensorNetwork net;
  std::vector<int> ancilla(code.pcm.num_rows());
  std::vector<std::vector<std::size_t>> supports(code.pcm.num_rows());
  for (std::size_t g = 0; g < code.pcm.num_rows(); ++g) {
    supports[g] = support(code.pcm.row(g));
    const std::size_t w = supports[g].size();
    ancilla[g] = net.add_node(ancilla_spider(w + 2));
    cap(net, LegoKind::XStopper, {ancilla[g], 0});
    cap(net, LegoKind::XStopper, {ancilla[g], w + 1});
  }
  for (std::size_t q = 0; q < code.n; ++q) {
    const Line line = build_line(net, lines[q]);
    for (std::size_t c = 0; c < lines[q].size(); ++c) {
      const std::size_t g = lines[q][c].generator;
      net.connect({ancilla[g], 1 + position(supports[g], q)}, line.couplings[c]);
    }
  }
  return net;
}

TensorNetwork layout_tanner(const CodeSpec& code) {
  const auto lines = couplings_by_qubit(code);
  TensorNetwork net;
  std::vector<int> check(code.pcm.num_rows());
  std::vector<std::vector<std::size_t>> supports(code.pcm.num_rows());
  for (std::size_t g = 0; g < code.pcm.num_rows(); ++g) {
    supports[g] = support(code.pcm.row(g));
    const std::size_t w = supports[g].size();
    if (w == 0) throw InvalidInputError("generator " + std::to_string(g) + " is the identity");
    LegoBlock b = w == 1 ? make_lego(LegoKind::XStopper) : ancilla_spider(w);
    b.leg_roles.assign(w, LegRole::Ancilla);
    check[g] = net.add_node(std::move(b));
  }
  for (std::size_t q = 0; q < code.n; ++q) {
    // The qubit node is the whole MSP line fused into one block: couplings
    // in generator order, then the physical leg.
    TensorNetwork local;
    const Line line = build_line(local, lines[q]);
    const ParityCheckMatrix h = network_pcm(local);
    const auto open = local.dangling();
    std::vector<std::size_t> order;
    for (const LegRef& c : line.couplings) order.push_back(position(open, c));
    order.push_back(position(open, line.physical));
    std::vector<LegRole> roles(line.couplings.size(), LegRole::Ancilla);
    roles.push_back(LegRole::Physical);
    const int node = net.add_node(make_custom_lego(reduced(restrict_to(h, order)), std::move(roles),
                                                   "qubit:" + std::to_string(q)));
    for (std::size_t c = 0; c < lines[q].size(); ++c) {
      const std::size_t g = lines[q][c].generator;
      net.connect({check[g], position(supports[g], q)}, {node, c});
    }
  }
  return net;
}

}  // namespace qlego
