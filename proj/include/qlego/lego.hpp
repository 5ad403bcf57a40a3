#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qlego/symplectic.hpp"

namespace qlego {

enum class LegoKind : std::uint8_t {
  XStopper,
  ZStopper,
  IdStopper,
  Hadamard,
  Bell,
  BitflipRep,     // Z-spider: Z_i Z_{i+1} and X^m
  PhaseflipRep,   // X-spider: X_i X_{i+1} and Z^m
  Enc602Perfect,  // [[6,0,4]] perfect encoding tensor of the [[5,1,3]] code
  Sub513,
  Enc603,  // [[6,0,3]] encoding tensor of the [[4,2,2]] code
  Sub512,
  Custom,  // explicit PCM, produced by fusing nodes
};

enum class LegRole : std::uint8_t { Physical, Logical, Ancilla };

struct LegoBlock {
  LegoKind kind = LegoKind::Custom;
  int arity = 0;  // repetition size for BitflipRep / PhaseflipRep, 0 otherwise
  ParityCheckMatrix pcm;
  std::vector<LegRole> leg_roles;
  std::string label;  // free-form description for fused blocks

  std::size_t num_legs() const { return pcm.num_legs(); }
};

/// Builds a library LEGO. `arity` is only read for the repetition kinds
/// and must be >= 2 there.
LegoBlock make_lego(LegoKind kind, int arity = 0);

/// Block carrying an explicit PCM; all legs default to Physical.
LegoBlock make_custom_lego(ParityCheckMatrix pcm, std::vector<LegRole> roles = {},
                           std::string label = {});

bool is_stopper(LegoKind kind);

/// Stable CLI identifiers: "x_stopper", "bitflip_rep:3", ...
std::string kind_name(LegoKind kind);
std::string lego_name(const LegoBlock& block);
LegoKind parse_kind(std::string_view name);
/// Parses "bitflip_rep:3" style identifiers into a block.
LegoBlock lego_from_name(std::string_view name);

std::string_view role_name(LegRole role);
LegRole parse_role(std::string_view name);

}  // namespace qlego
