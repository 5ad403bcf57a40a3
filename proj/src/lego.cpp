#include "qlego/lego.hpp"

#include <array>
#include <charconv>

#include "qlego/errors.hpp"

namespace qlego {

namespace {

struct KindEntry {
  LegoKind kind;
  std::string_view name;
};

constexpr std::array<KindEntry, 12> kKinds{{
    {LegoKind::XStopper, "x_stopper"},
    {LegoKind::ZStopper, "z_stopper"},
    {LegoKind::IdStopper, "id_stopper"},
    {LegoKind::Hadamard, "hadamard"},
    {LegoKind::Bell, "bell"},
    {LegoKind::BitflipRep, "bitflip_rep"},
    {LegoKind::PhaseflipRep, "phaseflip_rep"},
    {LegoKind::Enc602Perfect, "enc_602_perfect"},
    {LegoKind::Sub513, "sub_513"},
    {LegoKind::Enc603, "enc_603"},
    {LegoKind::Sub512, "sub_512"},
    {LegoKind::Custom, "custom"},
}};

ParityCheckMatrix repetition(int m, char pair_op, char global_op) {
  ParityCheckMatrix h(static_cast<std::size_t>(m));
  for (int i = 0; i + 1 < m; ++i) {
    std::string s(static_cast<std::size_t>(m), 'I');
    s[static_cast<std::size_t>(i)] = pair_op;
    s[static_cast<std::size_t>(i) + 1] = pair_op;
    h.append_row(PauliOp::from_string(s));
  }
  h.append_row(PauliOp::from_string(std::string(static_cast<std::size_t>(m), global_op)));
  return h;
}

ParityCheckMatrix rows_of(std::initializer_list<std::string_view> rows) {
  return ParityCheckMatrix::from_strings(rows);
}

std::vector<LegRole> roles(std::size_t physical, std::size_t logical) {
  std::vector<LegRole> out(physical, LegRole::Physical);
  out.insert(out.end(), logical, LegRole::Logical);
  return out;
}

}  // namespace

LegoBlock make_lego(LegoKind kind, int arity) {
  LegoBlock b;
  b.kind = kind;
  switch (kind) {
    case LegoKind::XStopper:
      b.pcm = rows_of({"X"});
      b.leg_roles = roles(1, 0);
      break;
    case LegoKind::ZStopper:
      b.pcm = rows_of({"Z"});
      b.leg_roles = roles(1, 0);
      break;
    case LegoKind::IdStopper:
      b.pcm = ParityCheckMatrix(1);
      b.leg_roles = roles(1, 0);
      break;
    case LegoKind::Hadamard:
      b.pcm = rows_of({"XZ", "ZX"});
      b.leg_roles = roles(2, 0);
      break;
    case LegoKind::Bell:
      b.pcm = rows_of({"XX", "ZZ"});
      b.leg_roles = roles(2, 0);
      break;
    case LegoKind::BitflipRep:
    case LegoKind::PhaseflipRep:
      if (arity < 2) {
        throw ContractViolation("repetition LEGO needs arity >= 2, got " + std::to_string(arity));
      }
      b.arity = arity;
      b.pcm = kind == LegoKind::BitflipRep ? repetition(arity, 'Z', 'X') : repetition(arity, 'X', 'Z');
      b.leg_roles = roles(static_cast<std::size_t>(arity), 0);
      break;
    case LegoKind::Sub513:
      b.pcm = rows_of({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"});
      b.leg_roles = roles(5, 0);
      break;
    case LegoKind::Enc602Perfect:
      b.pcm = rows_of({"XZZXII", "IXZZXI", "XIXZZI", "ZXIXZI", "XXXXXX", "ZZZZZZ"});
      b.leg_roles = roles(5, 1);
      break;
    case LegoKind::Sub512:
      b.pcm = rows_of({"XXXXI", "ZZZZI", "XXIIX", "ZIZIZ"});
      b.leg_roles = roles(5, 0);
      break;
    case LegoKind::Enc603:
      b.pcm = rows_of({"XXXXII", "ZZZZII", "XXIIXI", "ZIZIZI", "XIXIIX", "ZZIIIZ"});
      b.leg_roles = roles(5, 1);
      break;
    case LegoKind::Custom:
      throw ContractViolation("custom LEGOs are built with make_custom_lego");
  }
  return b;
}

LegoBlock make_custom_lego(ParityCheckMatrix pcm, std::vector<LegRole> leg_roles, std::string label) {
  if (leg_roles.empty()) leg_roles.assign(pcm.num_legs(), LegRole::Physical);
  if (leg_roles.size() != pcm.num_legs()) {
    throw ContractViolation("custom LEGO has " + std::to_string(pcm.num_legs()) + " legs but " +
                            std::to_string(leg_roles.size()) + " roles");
  }
  LegoBlock b;
  b.kind = LegoKind::Custom;
  b.pcm = std::move(pcm);
  b.leg_roles = std::move(leg_roles);
  b.label = std::move(label);
  return b;
}

bool is_stopper(LegoKind kind) {
  return kind == LegoKind::XStopper || kind == LegoKind::ZStopper || kind == LegoKind::IdStopper;
}

std::string kind_name(LegoKind kind) {
  for (const auto& e : kKinds) {
    if (e.kind == kind) return std::string(e.name);
  }
  return "unknown";
}

std::string lego_name(const LegoBlock& block) {
  std::string name = kind_name(block.kind);
  if (block.kind == LegoKind::BitflipRep || block.kind == LegoKind::PhaseflipRep) {
    name += ":" + std::to_string(block.arity);
  }
  return name;
}

LegoKind parse_kind(std::string_view name) {
  for (const auto& e : kKinds) {
    if (e.name == name) return e.kind;
  }
  throw ParseError("unknown LEGO kind '" + std::string(name) + "'");
}

LegoBlock lego_from_name(std::string_view name) {
  const auto colon = name.find(':');
  const LegoKind kind = parse_kind(name.substr(0, colon));
  int arity = 0;
  if (colon != std::string_view::npos) {
    const auto digits = name.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw ParseError("bad arity in LEGO name '" + std::string(name) + "'");
    }
  }
  return make_lego(kind, arity);
}

std::string_view role_name(LegRole role) {
  switch (role) {
    case LegRole::Physical: return "physical";
    case LegRole::Logical: return "logical";
    case LegRole::Ancilla: return "ancilla";
  }
  return "physical";
}

LegRole parse_role(std::string_view name) {
  if (name == "physical") return LegRole::Physical;
  if (name == "logical") return LegRole::Logical;
  if (name == "ancilla") return LegRole::Ancilla;
  throw ParseError("unknown leg role '" + std::string(name) + "'");
}

}  // namespace qlego
