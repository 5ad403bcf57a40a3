#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qlego {

using BigInt = boost::multiprecision::cpp_int;

/// Univariate polynomial in z with exact non-negative integer coefficients,
/// dense by degree with no trailing zeros. Coefficients live in 64-bit
/// words until an operation would overflow them; from then on the
/// polynomial switches to arbitrary precision.
class WeightPolynomial {
 public:
  WeightPolynomial() = default;
  static WeightPolynomial constant(const BigInt& c) { return monomial(0, c); }
  static WeightPolynomial monomial(std::size_t degree, const BigInt& c = 1);
  /// Builds from a degree -> coefficient list, e.g. {{0, 1}, {4, 3}}.
  static WeightPolynomial from_terms(const std::map<std::size_t, BigInt>& terms);

  bool is_zero() const { return size() == 0; }
  /// Highest degree with a nonzero coefficient; 0 for the zero polynomial.
  std::size_t degree() const { return is_zero() ? 0 : size() - 1; }
  /// Coefficient of z^d, zero past the end.
  BigInt operator[](std::size_t d) const;
  std::vector<BigInt> coeffs() const;
  bool is_wide() const { return wide_; }

  void add_monomial(std::size_t degree, const BigInt& c = 1);
  void add(const WeightPolynomial& p);
  /// this += a * b without a temporary polynomial.
  void add_product(const WeightPolynomial& a, const WeightPolynomial& b);

  BigInt sum() const;
  /// Exact division of every coefficient; throws InvalidInputError when a
  /// coefficient is not divisible.
  WeightPolynomial divided_exactly(const BigInt& d) const;

  /// "1 + 3z^4" style; "0" for the zero polynomial.
  std::string to_string() const;

  friend WeightPolynomial operator+(WeightPolynomial a, const WeightPolynomial& b) {
    a.add(b);
    return a;
  }
  friend WeightPolynomial operator*(const WeightPolynomial& a, const WeightPolynomial& b) {
    WeightPolynomial out;
    out.add_product(a, b);
    return out;
  }
  friend bool operator==(const WeightPolynomial& a, const WeightPolynomial& b);

 private:
  std::size_t size() const { return wide_ ? big_.size() : small_.size(); }
  void widen();

  bool wide_ = false;
  std::vector<std::uint64_t> small_;
  std::vector<BigInt> big_;
};

}  // namespace qlego
