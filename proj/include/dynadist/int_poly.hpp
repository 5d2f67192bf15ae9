#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynadist/arith.hpp"

namespace dynadist {

/// Default guard on (deg f)^n when iterating polynomials.
inline constexpr std::uint64_t kDefaultDegreeCap = 1u << 20;

/// Dense univariate polynomial over Z, coefficients ascending by degree.
/// Always normalized: no trailing zero coefficient except for the zero
/// polynomial, which has an empty coefficient vector and degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);
  IntPoly(std::initializer_list<long long> coeffs);

  static IntPoly zero() { return IntPoly(); }
  static IntPoly constant(BigInt c);
  static IntPoly x();
  /// The map x^k + m.
  static IntPoly power_map(std::uint64_t k, const BigInt& m);

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// Coefficient of x^i (zero beyond the degree).
  const BigInt& coeff(std::size_t i) const;
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  const BigInt& leading() const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend bool operator==(const IntPoly& a, const IntPoly& b) = default;

  IntPoly derivative() const;
  BigInt eval(const BigInt& a) const;

  /// outer(inner(x)), expanded in Z[x].
  static IntPoly compose(const IntPoly& outer, const IntPoly& inner);

  /// n-fold self-composition, n >= 1. Throws if (deg f)^n would exceed
  /// degree_cap.
  static IntPoly iterate(const IntPoly& f, unsigned n,
                         std::uint64_t degree_cap = kDefaultDegreeCap);

  /// Quotient of an exact division by a monic divisor. Throws if the
  /// remainder is nonzero.
  static IntPoly divrem_exact(const IntPoly& num, const IntPoly& den);

  /// Comma-separated ascending coefficients, e.g. "12,0,6,0,1" for
  /// x^4 + 6x^2 + 12. The zero polynomial prints as "0".
  std::string to_string() const;
  static IntPoly parse(std::string_view text);

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

}  // namespace dynadist
