#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qlego {

/// Phase-free n-qubit Pauli operator in symplectic form. Leg i carries
/// (x_i | z_i): (0|0)=I, (1|0)=X, (0|1)=Z, (1|1)=Y.
class PauliOp {
 public:
  PauliOp() = default;
  explicit PauliOp(std::size_t legs);

  /// Parses "XZZXI"-style strings (characters I, X, Y, Z).
  static PauliOp from_string(std::string_view text);

  std::size_t size() const { return legs_; }
  bool x(std::size_t leg) const;
  bool z(std::size_t leg) const;
  void set(std::size_t leg, bool x, bool z);
  char symbol(std::size_t leg) const;

  std::size_t weight() const;
  bool is_identity() const;
  std::string to_string() const;

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }

  friend bool operator==(const PauliOp&, const PauliOp&) = default;

 private:
  std::size_t legs_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

/// True iff p and q commute (symplectic product is zero).
bool commutes(const PauliOp& p, const PauliOp& q);

enum class Part : std::uint8_t { X, Z };

/// One bit column of a PCM: the X or Z part of a leg.
struct BitColumn {
  std::size_t leg;
  Part part;
  friend bool operator==(const BitColumn&, const BitColumn&) = default;
};

/// Bit-packed symplectic parity check matrix. Each row is stored as
/// `words()` X words followed by `words()` Z words.
class ParityCheckMatrix {
 public:
  ParityCheckMatrix() = default;
  /// Zero-row matrix on `legs` legs (the trivial group).
  explicit ParityCheckMatrix(std::size_t legs);

  static ParityCheckMatrix from_rows(std::size_t legs, std::span<const PauliOp> rows);
  /// Leg count is taken from the first string; throws ContractViolation on
  /// an empty list or ragged rows.
  static ParityCheckMatrix from_strings(std::span<const std::string> rows);
  static ParityCheckMatrix from_strings(std::initializer_list<std::string_view> rows);

  std::size_t num_legs() const { return legs_; }
  std::size_t num_rows() const { return rows_; }
  std::size_t words() const { return words_; }

  PauliOp row(std::size_t r) const;
  std::vector<PauliOp> rows() const;
  std::vector<std::string> to_strings() const;
  void append_row(const PauliOp& p);

  bool bit(std::size_t r, BitColumn c) const;
  void set_bit(std::size_t r, BitColumn c, bool value);

  std::span<std::uint64_t> row_words(std::size_t r) {
    return {data_.data() + r * 2 * words_, 2 * words_};
  }
  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {data_.data() + r * 2 * words_, 2 * words_};
  }

  void xor_row(std::size_t dst, std::size_t src);
  void swap_rows(std::size_t a, std::size_t b);
  void erase_row(std::size_t r);

  /// Every pair of rows commutes.
  bool is_isotropic() const;

  friend bool operator==(const ParityCheckMatrix&, const ParityCheckMatrix&) = default;

 private:
  std::size_t legs_ = 0;
  std::size_t words_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::uint64_t> data_;
};

struct Elimination {
  ParityCheckMatrix matrix;
  /// Pivot row per requested column, std::nullopt when the column is zero.
  std::vector<std::optional<std::size_t>> pivots;
};

/// Reduced row-echelon form restricted to `columns`, processed in order.
/// Pivot rows are moved to the top in column order; the row space is kept.
Elimination gauss_eliminate(const ParityCheckMatrix& h, std::span<const BitColumn> columns);

/// Full reduction: RREF over X block then Z block, zero rows dropped.
ParityCheckMatrix reduced(const ParityCheckMatrix& h);

std::size_t rank(const ParityCheckMatrix& h);

/// Block-diagonal combination; h1's legs come first.
ParityCheckMatrix tensor_product(const ParityCheckMatrix& h1, const ParityCheckMatrix& h2);

/// Sub-PCM on the listed legs, in the listed order. Rows are kept as-is.
ParityCheckMatrix restrict_to(const ParityCheckMatrix& h, std::span<const std::size_t> legs);

/// Rank of the row stack of two restrictions whose legs are aligned
/// pairwise (legs1[i] of h1 against legs2[i] of h2).
std::size_t stacked_rank(const ParityCheckMatrix& h1, std::span<const std::size_t> legs1,
                         const ParityCheckMatrix& h2, std::span<const std::size_t> legs2);

/// Bell-projects legs a and b and removes them. The result is reduced and
/// its remaining legs keep their relative order.
ParityCheckMatrix self_trace(const ParityCheckMatrix& h, std::size_t a, std::size_t b);

/// Self-trace of several disjoint leg pairs at once.
ParityCheckMatrix self_trace(const ParityCheckMatrix& h,
                             std::span<const std::pair<std::size_t, std::size_t>> pairs);

/// Joins h1 and h2 along (leg of h1, leg of h2) pairs. Remaining legs of
/// h1 come first, then those of h2.
ParityCheckMatrix trace(const ParityCheckMatrix& h1, const ParityCheckMatrix& h2,
                        std::span<const std::pair<std::size_t, std::size_t>> pairs);

bool row_space_equal(const ParityCheckMatrix& h1, const ParityCheckMatrix& h2);

struct EnumerationLimit {
  std::size_t max_rank = 28;
};

/// Visits all 2^rank elements of row(h) in binary-counter order over the
/// rows of reduced(h).
void for_each_group_element(const ParityCheckMatrix& h,
                            const std::function<void(const PauliOp&)>& visit,
                            EnumerationLimit limit = {});

std::vector<PauliOp> enumerate_group(const ParityCheckMatrix& h, EnumerationLimit limit = {});

/// Raw-word walk over row(h) in Gray-code order; cheaper than
/// for_each_group_element. `visit` receives the X then Z words of each
/// element. `h` must have full row rank.
void walk_group_words(const ParityCheckMatrix& h,
                      const std::function<void(std::span<const std::uint64_t>)>& visit,
                      EnumerationLimit limit = {});

}  // namespace qlego
