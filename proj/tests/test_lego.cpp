#include <doctest.h>

#include "oracles.hpp"
#include "qlego/errors.hpp"
#include "qlego/lego.hpp"

using namespace qlego;

namespace {

std::size_t min_nontrivial_weight(const ParityCheckMatrix& h) {
  std::size_t best = h.num_legs() + 1;
  for (const auto& p : enumerate_group(h)) {
    if (!p.is_identity()) best = std::min(best, p.weight());
  }
  return best;
}

}  // namespace

TEST_CASE("library LEGOs are isotropic with the expected ranks") {
  struct Expect {
    LegoKind kind;
    int arity;
    std::size_t legs, rank;
  };
  const Expect table[] = {
      {LegoKind::XStopper, 0, 1, 1},      {LegoKind::ZStopper, 0, 1, 1},   {LegoKind::IdStopper, 0, 1, 0},
      {LegoKind::Hadamard, 0, 2, 2},      {LegoKind::Bell, 0, 2, 2},       {LegoKind::BitflipRep, 4, 4, 4},
      {LegoKind::PhaseflipRep, 3, 3, 3},  {LegoKind::Enc602Perfect, 0, 6, 6}, {LegoKind::Sub513, 0, 5, 4},
      {LegoKind::Enc603, 0, 6, 6},        {LegoKind::Sub512, 0, 5, 4},
  };
  for (const auto& e : table) {
    const auto b = make_lego(e.kind, e.arity);
    INFO(lego_name(b));
    CHECK(b.num_legs() == e.legs);
    CHECK(b.leg_roles.size() == e.legs);
    CHECK(rank(b.pcm) == e.rank);
    CHECK(b.pcm.is_isotropic());
  }
}

TEST_CASE("encoding tensors have the right distances") {
  CHECK(min_nontrivial_weight(make_lego(LegoKind::Enc602Perfect).pcm) == 4);
  CHECK(min_nontrivial_weight(make_lego(LegoKind::Enc603).pcm) == 3);
  CHECK(make_lego(LegoKind::Enc603).leg_roles.back() == LegRole::Logical);
}

TEST_CASE("subspace LEGOs are the encoding tensors with the logical leg removed") {
  // Elements of the encoding tensor acting trivially on the logical leg.
  for (auto [enc, sub] : {std::pair{LegoKind::Enc602Perfect, LegoKind::Sub513},
                          std::pair{LegoKind::Enc603, LegoKind::Sub512}}) {
    std::set<std::string> trivial;
    for (const auto& s : oracle::group_strings(make_lego(enc).pcm)) {
      if (s.back() == 'I') trivial.insert(s.substr(0, 5));
    }
    CHECK(trivial == oracle::group_strings(make_lego(sub).pcm));
  }
}

TEST_CASE("repetition LEGOs") {
  const auto z = make_lego(LegoKind::BitflipRep, 3);
  CHECK(z.pcm.to_strings() == std::vector<std::string>{"ZZI", "IZZ", "XXX"});
  const auto x = make_lego(LegoKind::PhaseflipRep, 2);
  CHECK(x.pcm.to_strings() == std::vector<std::string>{"XX", "ZZ"});
  CHECK_THROWS_AS(make_lego(LegoKind::BitflipRep, 1), ContractViolation);
  CHECK_THROWS_AS(make_lego(LegoKind::Custom), ContractViolation);
}

TEST_CASE("names round-trip") {
  for (const char* name : {"x_stopper", "id_stopper", "bitflip_rep:5", "phaseflip_rep:2", "enc_603", "sub_513"}) {
    CHECK(lego_name(lego_from_name(name)) == name);
  }
  CHECK_THROWS_AS(lego_from_name("teapot"), ParseError);
  CHECK_THROWS_AS(lego_from_name("bitflip_rep:x"), ParseError);
  CHECK(parse_role(role_name(LegRole::Ancilla)) == LegRole::Ancilla);
}

TEST_CASE("custom blocks check their role count") {
  const auto h = ParityCheckMatrix::from_strings({"XX"});
  CHECK(make_custom_lego(h).leg_roles.size() == 2);
  CHECK_THROWS_AS(make_custom_lego(h, {LegRole::Physical}), ContractViolation);
}
