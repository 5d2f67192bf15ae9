#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dynadist/arith.hpp"

namespace dynadist {

/// Parameters of Z/nZ wr S_r acting on Z/nZ x {1..r}; the group has
/// order r! * n^r.
struct WreathParams {
  std::uint64_t n = 1;  // cycle length
  std::uint64_t r = 1;  // number of cycles
};

/// Group element ((a_1, ..., a_r), pi) with shifts mod n and pi a
/// permutation of {0..r-1}.
struct WreathElement {
  std::vector<std::uint64_t> shifts;
  std::vector<std::uint32_t> perm;
};

/// Whether the element acts on Z/nZ x {1..r} with a fixed point, i.e.
/// some i has pi(i) = i and a_i = 0. The fixed-point count is then a
/// multiple of n.
bool has_fixed_point(const WreathElement& sigma, const WreathParams& params);

/// Exact proportion of the group acting with a fixed point:
/// 1 - (1/(r! n^r)) * sum_i C(r,i) D_i n^i (n-1)^(r-i).
Rational p_rn_exact(const WreathParams& params);

/// Same proportion by full enumeration of the group. Rejects groups of
/// order above 10^7.
Rational p_rn_brute(const WreathParams& params);

/// Floating evaluation through q_i = D_i/i! = sum_{j<=i} (-1)^j/j!,
/// summing only the at most 64 largest terms; usable for r far beyond
/// factorial range. Absolute error below 1e-12.
double p_rn_float(const BigInt& r, std::uint64_t n);
double p_rn_float(std::uint64_t r, std::uint64_t n);

/// Exact rational or floating probability, depending on feasibility.
class ProbValue {
 public:
  static ProbValue exact(Rational q);
  static ProbValue approx(double f);

  bool is_exact() const { return exact_; }
  const Rational& rational() const;
  double to_double() const;

  /// this + (1 - this) * a, the recurrence step shared by the s-sequences.
  ProbValue absorb(const ProbValue& a) const;
  /// this * a.
  ProbValue times(const ProbValue& a) const;
  /// 1 - this.
  ProbValue complement() const;

 private:
  bool exact_ = false;
  Rational q_ = 0;
  double f_ = 0;
};

/// P_k(n) = P_{r_k(n), n}: exact when r_k(n) <= 20, float otherwise.
ProbValue p_k(std::uint64_t n, std::uint64_t k);

struct BoundCheck {
  double lhs = 0;  // |P_{r,n} - (1 - e^{-1/n})|
  double rhs = 0;  // (1 + 2^r)/r!
  bool ok = false;
};

/// Distance of P_{r,n} from 1 - e^{-1/n} against the (1+2^r)/r! bound.
BoundCheck check_limit_bound(const WreathParams& params);

/// |P_k(n)(1 - P_k(n)) - 1/n| < 121/n^2.
bool check_variance_bound(std::uint64_t n, std::uint64_t k);

/// Arithmetic progression b_i = start + (i-1)*step of period sizes,
/// with the map degree k; length is the number of steps to take.
struct ProgressionSpec {
  std::uint64_t start = 1;
  std::uint64_t step = 1;
  std::uint64_t k = 2;
  std::size_t length = 0;
};

/// s_0 = 0, s_i = s_{i-1} + (1 - s_{i-1}) * 2 P_k(b_i)(1 - P_k(b_i)).
/// Returns all of s_0 .. s_length.
std::vector<ProbValue> s_sequence(const ProgressionSpec& spec);

/// Closed form 1 - prod_i (1 - 2 P_k(b_i)(1 - P_k(b_i))).
ProbValue s_closed_form(const ProgressionSpec& spec);

/// t_i = t_{i-1} + a(i) * (1 - t_{i-1}) for i = 1..steps; every a(i)
/// must lie in [0, 1].
double recurrence_limit_probe(const std::function<double(std::size_t)>& a,
                              double t0, std::size_t steps);

/// Fraction of tuples ((sigma_1,tau_1),...,(sigma_L,tau_L)) in the
/// product of squared wreath groups where some index has exactly one of
/// Fix(sigma_i), Fix(tau_i) empty, by direct enumeration. Rejects specs
/// whose tuple count exceeds 10^7.
Rational s_brute(const ProgressionSpec& spec);

}  // namespace dynadist
