#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dynadist {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Moebius function: 0 if n has a squared prime factor, otherwise
/// (-1)^(number of distinct prime factors). Rejects n = 0.
int moebius(std::uint64_t n);

/// All positive divisors of n, ascending. Rejects n = 0.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// base^exp with the convention 0^0 = 1.
BigInt bigint_pow(const BigInt& base, std::uint64_t exp);

/// Number of length-n cycles of the generic degree-k unicritical map:
/// r_k(n) = (1/n) * sum_{d|n} k^d * mu(n/d).
/// The division is exact; a nonzero remainder is an internal error.
/// Requires n >= 1 and k >= 2.
BigInt r_k(std::uint64_t n, std::uint64_t k);

/// Derangement numbers D_{i,0}: D_0 = 1, D_1 = 0,
/// D_i = (i-1) * (D_{i-1} + D_{i-2}).
BigInt derangements(std::uint64_t i);

/// Binomial coefficient C(n, k); 0 when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Rencontres number D_{r,i} = C(r, i) * D_{r-i,0}: permutations of r
/// letters with exactly i fixed points. Rejects i > r.
BigInt rencontres(std::uint64_t r, std::uint64_t i);

/// Segmented ascending prime generator over [lo, hi]. Memory stays
/// O(sqrt(hi) + segment), independent of hi - lo.
class PrimeStream {
 public:
  explicit PrimeStream(std::uint64_t hi) : PrimeStream(2, hi) {}
  PrimeStream(std::uint64_t lo, std::uint64_t hi);

  /// Writes the next prime into p and returns true, or returns false
  /// once the range is exhausted.
  bool next(std::uint64_t& p);

 private:
  void load_segment(std::uint64_t seg_lo);

  std::uint64_t hi_;
  std::uint64_t cursor_;                // next candidate value to inspect
  std::uint64_t seg_lo_ = 0;            // first value covered by seg_
  std::vector<std::uint32_t> base_;     // sieving primes <= sqrt(hi)
  std::vector<bool> composite_;         // marks for [seg_lo_, seg_lo_ + span)
  static constexpr std::uint64_t kSpan = 1u << 16;
};

/// All primes <= x, ascending. Empty for x < 2.
std::vector<std::uint64_t> primes_up_to(std::uint64_t x);

/// Applies fn to every prime in [lo, hi], ascending.
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn);

}  // namespace dynadist
