#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynadist/int_poly.hpp"

namespace dynadist {

/// Deterministic splittable generator; used wherever randomized
/// algorithms need reproducible draws.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitMix64: empty range");
    std::uint64_t threshold = -bound % bound;
    for (;;) {
      std::uint64_t v = next();
      if (v >= threshold) return v % bound;
    }
  }
};

/// Arithmetic in F_p for a word-sized prime p.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

/// Dense univariate polynomial over F_p, coefficients ascending and
/// reduced into [0, p). Normalized like IntPoly. The modulus must fit a
/// machine word; operations on mismatched moduli throw.
class ModPoly {
 public:
  explicit ModPoly(std::uint64_t p);
  ModPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs);

  static ModPoly zero(std::uint64_t p) { return ModPoly(p); }
  static ModPoly constant(std::uint64_t p, std::uint64_t c);
  static ModPoly x(std::uint64_t p);
  /// x - a.
  static ModPoly linear_root(std::uint64_t p, std::uint64_t a);

  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::uint64_t coeff(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : 0;
  }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  friend ModPoly operator+(const ModPoly& a, const ModPoly& b);
  friend ModPoly operator-(const ModPoly& a, const ModPoly& b);
  friend ModPoly operator*(const ModPoly& a, const ModPoly& b);
  friend bool operator==(const ModPoly& a, const ModPoly& b) = default;

  ModPoly derivative() const;
  std::uint64_t eval(std::uint64_t a) const;

  /// Scales so the leading coefficient is 1. Zero stays zero.
  ModPoly monic() const;

  static ModPoly compose(const ModPoly& outer, const ModPoly& inner);
  static ModPoly iterate(const ModPoly& f, unsigned n,
                         std::uint64_t degree_cap = kDefaultDegreeCap);

  /// Quotient and remainder by a nonzero divisor.
  static std::pair<ModPoly, ModPoly> divrem(const ModPoly& num,
                                            const ModPoly& den);
  /// Quotient of an exact division by a monic divisor; throws on a
  /// nonzero remainder.
  static ModPoly divrem_exact(const ModPoly& num, const ModPoly& den);

  std::string to_string() const;

 private:
  void normalize();
  void check_same(const ModPoly& other) const;

  std::uint64_t p_;
  std::vector<std::uint64_t> coeffs_;
};

/// Coefficientwise reduction of an integer polynomial mod p.
ModPoly reduce_mod_p(const IntPoly& f, std::uint64_t p);

/// Monic gcd via Euclid. Both inputs must share a modulus and not both
/// be zero.
ModPoly gcd_mod(const ModPoly& a, const ModPoly& b);

/// x^e reduced mod h (deg h >= 1), by square-and-multiply with
/// reduction at each step.
ModPoly frobenius_power(const ModPoly& h, std::uint64_t e);

/// base^e mod h for an arbitrary base polynomial.
ModPoly pow_mod_poly(const ModPoly& base, std::uint64_t e, const ModPoly& h);

/// Whether h has a root in F_p. Uses deg gcd(x^p - x mod h, h) >= 1;
/// p = 2 falls back to evaluating at both points.
bool has_root_mod_p(const ModPoly& h);

struct RootsOptions {
  /// Below this modulus, roots are found by exhaustive evaluation.
  std::uint64_t exhaustive_threshold = 1u << 20;
  /// Seed for the equal-degree splitting above the threshold.
  std::uint64_t seed = 0x5eed;
};

/// All distinct roots of h in F_p, ascending. Exhaustive evaluation for
/// small p, otherwise gcd with x^p - x followed by randomized
/// equal-degree splitting (retried until fully split).
std::vector<std::uint64_t> roots_mod_p(const ModPoly& h,
                                       const RootsOptions& opts = {});

}  // namespace dynadist
