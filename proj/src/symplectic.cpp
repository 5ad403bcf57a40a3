#include "qlego/symplectic.hpp"

#include <algorithm>
#include <bit>

#include "qlego/errors.hpp"

namespace qlego {

namespace {

std::size_t word_count(std::size_t legs) { return (legs + 63) / 64; }

std::uint64_t leg_mask(std::size_t leg) { return std::uint64_t{1} << (leg % 64); }

// Word offset of a bit column inside a row.
std::size_t column_word(BitColumn c, std::size_t words) {
  return (c.part == Part::X ? 0 : words) + c.leg / 64;
}

std::string leg_error(std::size_t leg, std::size_t legs) {
  return "leg " + std::to_string(leg) + " out of range for " + std::to_string(legs) + " legs";
}

// Drops every zero row, keeping order.
void drop_zero_rows(ParityCheckMatrix& h) {
  for (std::size_t r = h.num_rows(); r-- > 0;) {
    auto w = h.row_words(r);
    if (std::all_of(w.begin(), w.end(), [](std::uint64_t v) { return v == 0; })) h.erase_row(r);
  }
}

std::vector<BitColumn> all_columns(std::size_t legs) {
  std::vector<BitColumn> cols;
  cols.reserve(2 * legs);
  for (std::size_t i = 0; i < legs; ++i) cols.push_back({i, Part::X});
  for (std::size_t i = 0; i < legs; ++i) cols.push_back({i, Part::Z});
  return cols;
}

// In-place RREF restricted to `columns`; returns pivot rows.
std::vector<std::optional<std::size_t>> eliminate(ParityCheckMatrix& h,
                                                  std::span<const BitColumn> columns) {
  std::vector<std::optional<std::size_t>> pivots(columns.size());
  const std::size_t words = h.words();
  std::size_t next = 0;
  for (std::size_t ci = 0; ci < columns.size() && next < h.num_rows(); ++ci) {
    const std::size_t w = column_word(columns[ci], words);
    const std::uint64_t m = leg_mask(columns[ci].leg);
    std::size_t found = h.num_rows();
    for (std::size_t r = next; r < h.num_rows(); ++r) {
      if (h.row_words(r)[w] & m) {
        found = r;
        break;
      }
    }
    if (found == h.num_rows()) continue;
    h.swap_rows(next, found);
    for (std::size_t r = 0; r < h.num_rows(); ++r) {
      if (r != next && (h.row_words(r)[w] & m)) h.xor_row(r, next);
    }
    pivots[ci] = next++;
  }
  return pivots;
}

// Rank of a dense bit matrix given as rows of `stride` words; destroys it.
std::size_t rank_of_words(std::vector<std::uint64_t>& data, std::size_t rows, std::size_t stride) {
  std::size_t r = 0;
  for (std::size_t w = 0; w < stride && r < rows; ++w) {
    for (int b = 0; b < 64 && r < rows; ++b) {
      const std::uint64_t m = std::uint64_t{1} << b;
      std::size_t found = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (data[i * stride + w] & m) {
          found = i;
          break;
        }
      }
      if (found == rows) continue;
      if (found != r) {
        std::swap_ranges(data.begin() + static_cast<std::ptrdiff_t>(found * stride),
                         data.begin() + static_cast<std::ptrdiff_t>((found + 1) * stride),
                         data.begin() + static_cast<std::ptrdiff_t>(r * stride));
      }
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (data[i * stride + w] & m) {
          for (std::size_t k = w; k < stride; ++k) data[i * stride + k] ^= data[r * stride + k];
        }
      }
      ++r;
    }
  }
  return r;
}

// Keeps only the elements of row(h) whose operators on legs a and b agree,
// one Pauli part at a time. After reducing on the pair of columns (a.P,
// b.P) every row has at most one 1 in them except possibly the a-pivot
// row, so the "first non-zero row" per column decides the case.
void keep_matching(ParityCheckMatrix& h, std::size_t a, std::size_t b) {
  for (Part part : {Part::X, Part::Z}) {
    const BitColumn cols[2] = {{a, part}, {b, part}};
    eliminate(h, cols);
    std::optional<std::size_t> first[2];
    for (int c = 0; c < 2; ++c) {
      for (std::size_t r = 0; r < h.num_rows(); ++r) {
        if (h.bit(r, cols[c])) {
          first[c] = r;
          break;
        }
      }
    }
    if (first[0] == first[1]) continue;
    if (!first[0] || !first[1]) {
      h.erase_row(first[0] ? *first[0] : *first[1]);
      continue;
    }
    h.xor_row(*first[1], *first[0]);
    h.erase_row(*first[0]);
  }
}

void check_leg(const ParityCheckMatrix& h, std::size_t leg) {
  if (leg >= h.num_legs()) throw ContractViolation(leg_error(leg, h.num_legs()));
}

}  // namespace

// ---------------------------------------------------------------- PauliOp

PauliOp::PauliOp(std::size_t legs)
    : legs_(legs), x_(word_count(legs), 0), z_(word_count(legs), 0) {}

PauliOp PauliOp::from_string(std::string_view text) {
  PauliOp p(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'I': break;
      case 'X': p.set(i, true, false); break;
      case 'Z': p.set(i, false, true); break;
      case 'Y': p.set(i, true, true); break;
      default:
        throw ContractViolation("invalid Pauli character '" + std::string(1, text[i]) + "'");
    }
  }
  return p;
}

bool PauliOp::x(std::size_t leg) const { return (x_[leg / 64] & leg_mask(leg)) != 0; }
bool PauliOp::z(std::size_t leg) const { return (z_[leg / 64] & leg_mask(leg)) != 0; }

void PauliOp::set(std::size_t leg, bool x, bool z) {
  if (leg >= legs_) throw ContractViolation(leg_error(leg, legs_));
  const std::uint64_t m = leg_mask(leg);
  x_[leg / 64] = x ? (x_[leg / 64] | m) : (x_[leg / 64] & ~m);
  z_[leg / 64] = z ? (z_[leg / 64] | m) : (z_[leg / 64] & ~m);
}

char PauliOp::symbol(std::size_t leg) const {
  static constexpr char kSymbols[] = {'I', 'X', 'Z', 'Y'};
  return kSymbols[(x(leg) ? 1 : 0) | (z(leg) ? 2 : 0)];
}

std::size_t PauliOp::weight() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
  return w;
}

bool PauliOp::is_identity() const { return weight() == 0; }

std::string PauliOp::to_string() const {
  std::string s(legs_, 'I');
  for (std::size_t i = 0; i < legs_; ++i) s[i] = symbol(i);
  return s;
}

bool commutes(const PauliOp& p, const PauliOp& q) {
  if (p.size() != q.size()) {
    throw ContractViolation("commutation check between Paulis of different lengths");
  }
  int parity = 0;
  auto px = p.x_words(), pz = p.z_words(), qx = q.x_words(), qz = q.z_words();
  for (std::size_t i = 0; i < px.size(); ++i) {
    parity ^= std::popcount((px[i] & qz[i]) ^ (pz[i] & qx[i])) & 1;
  }
  return parity == 0;
}

// ------------------------------------------------------ ParityCheckMatrix

ParityCheckMatrix::ParityCheckMatrix(std::size_t legs) : legs_(legs), words_(word_count(legs)) {}

ParityCheckMatrix ParityCheckMatrix::from_rows(std::size_t legs, std::span<const PauliOp> rows) {
  ParityCheckMatrix h(legs);
  for (const auto& p : rows) h.append_row(p);
  return h;
}

ParityCheckMatrix ParityCheckMatrix::from_strings(std::span<const std::string> rows) {
  if (rows.empty()) throw ContractViolation("cannot infer leg count from an empty row list");
  ParityCheckMatrix h(rows.front().size());
  for (const auto& s : rows) h.append_row(PauliOp::from_string(s));
  return h;
}

ParityCheckMatrix ParityCheckMatrix::from_strings(std::initializer_list<std::string_view> rows) {
  std::vector<std::string> copy(rows.begin(), rows.end());
  return from_strings(std::span<const std::string>(copy));
}

PauliOp ParityCheckMatrix::row(std::size_t r) const {
  PauliOp p(legs_);
  for (std::size_t i = 0; i < legs_; ++i) {
    p.set(i, bit(r, {i, Part::X}), bit(r, {i, Part::Z}));
  }
  return p;
}

std::vector<PauliOp> ParityCheckMatrix::rows() const {
  std::vector<PauliOp> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

std::vector<std::string> ParityCheckMatrix::to_strings() const {
  std::vector<std::string> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r).to_string());
  return out;
}

void ParityCheckMatrix::append_row(const PauliOp& p) {
  if (p.size() != legs_) {
    throw ContractViolation("row has " + std::to_string(p.size()) + " legs, matrix has " +
                            std::to_string(legs_));
  }
  data_.insert(data_.end(), p.x_words().begin(), p.x_words().end());
  data_.insert(data_.end(), p.z_words().begin(), p.z_words().end());
  ++rows_;
}

bool ParityCheckMatrix::bit(std::size_t r, BitColumn c) const {
  return (row_words(r)[column_word(c, words_)] & leg_mask(c.leg)) != 0;
}

void ParityCheckMatrix::set_bit(std::size_t r, BitColumn c, bool value) {
  auto& w = row_words(r)[column_word(c, words_)];
  w = value ? (w | leg_mask(c.leg)) : (w & ~leg_mask(c.leg));
}

void ParityCheckMatrix::xor_row(std::size_t dst, std::size_t src) {
  auto d = row_words(dst);
  auto s = row_words(src);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] ^= s[i];
}

void ParityCheckMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  auto ra = row_words(a);
  auto rb = row_words(b);
  std::swap_ranges(ra.begin(), ra.end(), rb.begin());
}

void ParityCheckMatrix::erase_row(std::size_t r) {
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(r * 2 * words_);
  data_.erase(first, first + static_cast<std::ptrdiff_t>(2 * words_));
  --rows_;
}

bool ParityCheckMatrix::is_isotropic() const {
  const auto all = rows();
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (!commutes(all[i], all[j])) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------- operations

Elimination gauss_eliminate(const ParityCheckMatrix& h, std::span<const BitColumn> columns) {
  for (const auto& c : columns) check_leg(h, c.leg);
  Elimination out{h, {}};
  out.pivots = eliminate(out.matrix, columns);
  return out;
}

ParityCheckMatrix reduced(const ParityCheckMatrix& h) {
  ParityCheckMatrix out = h;
  const auto cols = all_columns(h.num_legs());
  eliminate(out, cols);
  drop_zero_rows(out);
  return out;
}

std::size_t rank(const ParityCheckMatrix& h) {
  const std::size_t stride = 2 * h.words();
  if (stride == 0) return 0;
  std::vector<std::uint64_t> data;
  data.reserve(h.num_rows() * stride);
  for (std::size_t r = 0; r < h.num_rows(); ++r) {
    auto w = h.row_words(r);
    data.insert(data.end(), w.begin(), w.end());
  }
  return rank_of_words(data, h.num_rows(), stride);
}

ParityCheckMatrix tensor_product(const ParityCheckMatrix& h1, const ParityCheckMatrix& h2) {
  const std::size_t n1 = h1.num_legs();
  ParityCheckMatrix out(n1 + h2.num_legs());
  for (std::size_t r = 0; r < h1.num_rows(); ++r) {
    PauliOp p(out.num_legs());
    for (std::size_t i = 0; i < n1; ++i) p.set(i, h1.bit(r, {i, Part::X}), h1.bit(r, {i, Part::Z}));
    out.append_row(p);
  }
  for (std::size_t r = 0; r < h2.num_rows(); ++r) {
    PauliOp p(out.num_legs());
    for (std::size_t i = 0; i < h2.num_legs(); ++i) {
      p.set(n1 + i, h2.bit(r, {i, Part::X}), h2.bit(r, {i, Part::Z}));
    }
    out.append_row(p);
  }
  return out;
}

ParityCheckMatrix restrict_to(const ParityCheckMatrix& h, std::span<const std::size_t> legs) {
  std::vector<bool> seen(h.num_legs(), false);
  for (std::size_t leg : legs) {
    check_leg(h, leg);
    if (seen[leg]) throw ContractViolation("duplicate leg " + std::to_string(leg) + " in restriction");
    seen[leg] = true;
  }
  ParityCheckMatrix out(legs.size());
  PauliOp p(legs.size());
  for (std::size_t r = 0; r < h.num_rows(); ++r) {
    for (std::size_t i = 0; i < legs.size(); ++i) {
      p.set(i, h.bit(r, {legs[i], Part::X}), h.bit(r, {legs[i], Part::Z}));
    }
    out.append_row(p);
  }
  return out;
}

std::size_t stacked_rank(const ParityCheckMatrix& h1, std::span<const std::size_t> legs1,
                         const ParityCheckMatrix& h2, std::span<const std::size_t> legs2) {
  if (legs1.size() != legs2.size()) {
    throw ContractViolation("stacked restriction needs equally many legs on both sides");
  }
  ParityCheckMatrix w = restrict_to(h1, legs1);
  const ParityCheckMatrix lower = restrict_to(h2, legs2);
  for (std::size_t r = 0; r < lower.num_rows(); ++r) w.append_row(lower.row(r));
  return rank(w);
}

ParityCheckMatrix self_trace(const ParityCheckMatrix& h,
                             std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<bool> traced(h.num_legs(), false);
  for (const auto& [a, b] : pairs) {
    check_leg(h, a);
    check_leg(h, b);
    if (a == b) throw ContractViolation("cannot self-trace leg " + std::to_string(a) + " with itself");
    if (traced[a] || traced[b]) throw ContractViolation("leg traced twice in one self-trace");
    traced[a] = traced[b] = true;
  }
  ParityCheckMatrix work = h;
  for (const auto& [a, b] : pairs) keep_matching(work, a, b);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < h.num_legs(); ++i) {
    if (!traced[i]) keep.push_back(i);
  }
  return reduced(restrict_to(work, keep));
}

ParityCheckMatrix self_trace(const ParityCheckMatrix& h, std::size_t a, std::size_t b) {
  const std::pair<std::size_t, std::size_t> pair{a, b};
  return self_trace(h, std::span(&pair, 1));
}

ParityCheckMatrix trace(const ParityCheckMatrix& h1, const ParityCheckMatrix& h2,
                        std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (pairs.empty()) throw ContractViolation("trace needs at least one leg pair");
  std::vector<std::pair<std::size_t, std::size_t>> shifted;
  shifted.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    check_leg(h1, a);
    check_leg(h2, b);
    shifted.emplace_back(a, h1.num_legs() + b);
  }
  return self_trace(tensor_product(h1, h2), shifted);
}

bool row_space_equal(const ParityCheckMatrix& h1, const ParityCheckMatrix& h2) {
  if (h1.num_legs() != h2.num_legs()) {
    throw ContractViolation("row space comparison between " + std::to_string(h1.num_legs()) +
                            " and " + std::to_string(h2.num_legs()) + " legs");
  }
  return reduced(h1) == reduced(h2);
}

void for_each_group_element(const ParityCheckMatrix& h,
                            const std::function<void(const PauliOp&)>& visit,
                            EnumerationLimit limit) {
  const ParityCheckMatrix basis = reduced(h);
  const std::size_t r = basis.num_rows();
  if (r > limit.max_rank) {
    throw ResourceLimitError("group of rank " + std::to_string(r) + " exceeds enumeration cap 2^" +
                             std::to_string(limit.max_rank));
  }
  const auto gens = basis.rows();
  PauliOp element(h.num_legs());
  for (std::uint64_t counter = 0; counter < (std::uint64_t{1} << r); ++counter) {
    element = PauliOp(h.num_legs());
    for (std::size_t j = 0; j < r; ++j) {
      if (!((counter >> j) & 1)) continue;
      for (std::size_t leg = 0; leg < h.num_legs(); ++leg) {
        element.set(leg, element.x(leg) != gens[j].x(leg), element.z(leg) != gens[j].z(leg));
      }
    }
    visit(element);
  }
}

std::vector<PauliOp> enumerate_group(const ParityCheckMatrix& h, EnumerationLimit limit) {
  std::vector<PauliOp> out;
  for_each_group_element(h, [&](const PauliOp& p) { out.push_back(p); }, limit);
  return out;
}

void walk_group_words(const ParityCheckMatrix& h,
                      const std::function<void(std::span<const std::uint64_t>)>& visit,
                      EnumerationLimit limit) {
  const std::size_t r = h.num_rows();
  if (r > limit.max_rank) {
    throw ResourceLimitError("group of rank " + std::to_string(r) + " exceeds enumeration cap 2^" +
                             std::to_string(limit.max_rank));
  }
  std::vector<std::uint64_t> element(2 * h.words(), 0);
  visit(element);
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << r); ++g) {
    auto src = h.row_words(static_cast<std::size_t>(std::countr_zero(g)));
    for (std::size_t i = 0; i < element.size(); ++i) element[i] ^= src[i];
    visit(element);
  }
}

}  // namespace qlego
