#include "qlego/polynomial.hpp"

#include <limits>

#include "qlego/errors.hpp"

namespace qlego {

namespace {

using u128 = unsigned __int128;
constexpr u128 kMax64 = std::numeric_limits<std::uint64_t>::max();

}  // namespace

WeightPolynomial WeightPolynomial::monomial(std::size_t degree, const BigInt& c) {
  WeightPolynomial p;
  p.add_monomial(degree, c);
  return p;
}

WeightPolynomial WeightPolynomial::from_terms(const std::map<std::size_t, BigInt>& terms) {
  WeightPolynomial p;
  for (const auto& [d, c] : terms) p.add_monomial(d, c);
  return p;
}

BigInt WeightPolynomial::operator[](std::size_t d) const {
  if (d >= size()) return 0;
  return wide_ ? big_[d] : BigInt(small_[d]);
}

std::vector<BigInt> WeightPolynomial::coeffs() const {
  if (wide_) return big_;
  return {small_.begin(), small_.end()};
}

void WeightPolynomial::widen() {
  if (wide_) return;
  big_.assign(small_.begin(), small_.end());
  small_.clear();
  wide_ = true;
}

void WeightPolynomial::add_monomial(std::size_t degree, const BigInt& c) {
  if (c < 0) throw ContractViolation("weight polynomials have non-negative coefficients");
  if (c == 0) return;
  if (!wide_) {
    const BigInt cur = degree < small_.size() ? BigInt(small_[degree]) : BigInt(0);
    const BigInt next = cur + c;
    if (next <= std::numeric_limits<std::uint64_t>::max()) {
      if (small_.size() <= degree) small_.resize(degree + 1, 0);
      small_[degree] = static_cast<std::uint64_t>(next);
      return;
    }
    widen();
  }
  if (big_.size() <= degree) big_.resize(degree + 1);
  big_[degree] += c;
}

void WeightPolynomial::add(const WeightPolynomial& p) {
  if (!wide_ && !p.wide_) {
    bool overflow = false;
    std::vector<std::uint64_t> out = small_;
    if (out.size() < p.small_.size()) out.resize(p.small_.size(), 0);
    for (std::size_t i = 0; i < p.small_.size(); ++i) overflow |= __builtin_add_overflow(out[i], p.small_[i], &out[i]);
    if (!overflow) {
      small_ = std::move(out);
      return;
    }
  }
  widen();
  const auto other = p.coeffs();
  if (big_.size() < other.size()) big_.resize(other.size());
  for (std::size_t i = 0; i < other.size(); ++i) big_[i] += other[i];
}

void WeightPolynomial::add_product(const WeightPolynomial& a, const WeightPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return;
  const std::size_t need = a.size() + b.size() - 1;
  if (!wide_ && !a.wide_ && !b.wide_) {
    // Accumulate in 128 bits; a degree sum has at most min(|a|,|b|) terms,
    // each below 2^128, so overflow of the accumulator is checked too.
    constexpr std::size_t kStack = 64;
    u128 stack_acc[kStack];
    std::vector<u128> heap_acc;
    u128* acc = stack_acc;
    if (need > kStack) {
      heap_acc.resize(need);
      acc = heap_acc.data();
    }
    for (std::size_t k = 0; k < need; ++k) acc[k] = k < small_.size() ? small_[k] : 0;
    bool overflow = false;
    for (std::size_t i = 0; i < a.small_.size(); ++i) {
      const u128 ai = a.small_[i];
      if (ai == 0) continue;
      for (std::size_t j = 0; j < b.small_.size(); ++j) {
        overflow |= __builtin_add_overflow(acc[i + j], ai * b.small_[j], &acc[i + j]);
      }
    }
    for (std::size_t k = 0; k < need && !overflow; ++k) overflow = acc[k] > kMax64;
    if (!overflow) {
      if (small_.size() < need) small_.resize(need);
      for (std::size_t k = 0; k < need; ++k) small_[k] = static_cast<std::uint64_t>(acc[k]);
      return;
    }
  }
  widen();
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  if (big_.size() < need) big_.resize(need);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] == 0) continue;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (cb[j] != 0) big_[i + j] += ca[i] * cb[j];
    }
  }
}

BigInt WeightPolynomial::sum() const {
  BigInt s = 0;
  for (const auto& c : coeffs()) s += c;
  return s;
}

WeightPolynomial WeightPolynomial::divided_exactly(const BigInt& d) const {
  if (d == 0) throw ContractViolation("polynomial division by zero");
  WeightPolynomial out;
  const auto cs = coeffs();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    BigInt q, r;
    boost::multiprecision::divide_qr(cs[i], d, q, r);
    if (r != 0) {
      throw InvalidInputError("coefficient of z^" + std::to_string(i) + " is not divisible by " + d.str());
    }
    out.add_monomial(i, q);
  }
  return out;
}

std::string WeightPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  const auto cs = coeffs();
  for (std::size_t d = 0; d < cs.size(); ++d) {
    if (cs[d] == 0) continue;
    if (!out.empty()) out += " + ";
    if (d == 0) {
      out += cs[d].str();
      continue;
    }
    if (cs[d] != 1) out += cs[d].str();
    out += d == 1 ? "z" : "z^" + std::to_string(d);
  }
  return out;
}

bool operator==(const WeightPolynomial& a, const WeightPolynomial& b) {
  if (!a.wide_ && !b.wide_) return a.small_ == b.small_;
  return a.coeffs() == b.coeffs();
}

}  // namespace qlego
