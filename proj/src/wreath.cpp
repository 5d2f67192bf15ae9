#include "dynadist/wreath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <stdexcept>

namespace dynadist {

bool has_fixed_point(const WreathElement& sigma, const WreathParams& params) {
  if (sigma.shifts.size() != params.r || sigma.perm.size() != params.r) {
    throw std::invalid_argument("has_fixed_point: shape mismatch");
  }
  for (std::size_t i = 0; i < params.r; ++i) {
    if (sigma.perm[i] == i && sigma.shifts[i] % params.n == 0) return true;
  }
  return false;
}

namespace {

BigInt factorial(std::uint64_t r) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= r; ++i) f *= i;
  return f;
}

BigInt group_order(const WreathParams& params) {
  return factorial(params.r) * bigint_pow(BigInt(params.n), params.r);
}

}  // namespace

Rational p_rn_exact(const WreathParams& params) {
  if (params.n == 0 || params.r == 0) {
    throw std::invalid_argument("p_rn_exact: n and r must be positive");
  }
  const std::uint64_t r = params.r;
  const BigInt n = params.n;
  BigInt no_fix = 0;
  for (std::uint64_t i = 0; i <= r; ++i) {
    no_fix += binomial(r, i) * derangements(i) * bigint_pow(n, i) *
              bigint_pow(n - 1, r - i);
  }
  BigInt order = group_order(params);
  return Rational(order - no_fix, order);
}

namespace {

// Elements with a fixed point among ((shifts), [prefix | suffix perms]):
// the permutation runs over prefix followed by every arrangement of the
// remaining letters.
std::uint64_t count_fixed_in_class(const WreathParams& params,
                                   std::uint32_t prefix) {
  const std::size_t r = params.r;
  const std::uint64_t n = params.n;
  WreathElement sigma;
  sigma.perm.resize(r);
  sigma.perm[0] = prefix;
  std::size_t at = 1;
  for (std::uint32_t v = 0; v < r; ++v) {
    if (v != prefix) sigma.perm[at++] = v;
  }
  std::uint64_t fixed = 0;
  do {
    sigma.shifts.assign(r, 0);
    for (;;) {
      if (has_fixed_point(sigma, params)) ++fixed;
      // odometer over (Z/nZ)^r
      std::size_t pos = 0;
      while (pos < r && ++sigma.shifts[pos] == n) sigma.shifts[pos++] = 0;
      if (pos == r) break;
    }
  } while (std::next_permutation(sigma.perm.begin() + 1, sigma.perm.end()));
  return fixed;
}

}  // namespace

Rational p_rn_brute(const WreathParams& params) {
  if (params.n == 0 || params.r == 0) {
    throw std::invalid_argument("p_rn_brute: n and r must be positive");
  }
  const BigInt order = group_order(params);
  if (order > 10'000'000) {
    throw std::invalid_argument("p_rn_brute: group order exceeds 10^7");
  }
  // Permutations split into classes by first image; classes are summed
  // in index order, so the count is the same at any thread count.
  const std::uint32_t classes = static_cast<std::uint32_t>(params.r);
  std::vector<std::uint64_t> per_class(classes, 0);
  unsigned threads = std::min<unsigned>(
      {classes, std::max(1u, std::thread::hardware_concurrency()), 4u});
  if (threads <= 1 || order < 100'000) {
    for (std::uint32_t c = 0; c < classes; ++c) {
      per_class[c] = count_fixed_in_class(params, c);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint32_t c = t; c < classes; c += threads) {
          per_class[c] = count_fixed_in_class(params, c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  std::uint64_t fixed = 0;
  for (std::uint64_t c : per_class) fixed += c;
  return Rational(BigInt(fixed), order);
}

namespace {

// q_i = D_i / i!; converged to 1/e at machine precision by i ~ 20.
double derangement_ratio(std::uint64_t i) {
  double q = 0;
  double term = 1;  // (-1)^j / j!
  std::uint64_t cap = std::min<std::uint64_t>(i, 40);
  for (std::uint64_t j = 0; j <= cap; ++j) {
    q += term;
    term = -term / static_cast<double>(j + 1);
  }
  return q;
}

double p_rn_float_clamped(std::uint64_t r_clamped, bool r_is_huge,
                          std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("p_rn_float: n must be positive");
  const double x = (static_cast<double>(n) - 1.0) / static_cast<double>(n);
  double sum = 0;
  double xs_over_fact = 1;  // x^s / s!
  const std::uint64_t smax = r_is_huge ? 63 : std::min<std::uint64_t>(r_clamped, 63);
  for (std::uint64_t s = 0; s <= smax; ++s) {
    std::uint64_t i = r_clamped - s;  // only min(i, 40) matters downstream
    sum += derangement_ratio(r_is_huge ? 64 : i) * xs_over_fact;
    if (!r_is_huge && i == 0) break;
    xs_over_fact *= x / static_cast<double>(s + 1);
  }
  return 1.0 - sum;
}

}  // namespace

double p_rn_float(std::uint64_t r, std::uint64_t n) {
  if (r == 0) throw std::invalid_argument("p_rn_float: r must be positive");
  if (r > 1'000'000'000ull) return p_rn_float_clamped(0, true, n);
  return p_rn_float_clamped(r, false, n);
}

double p_rn_float(const BigInt& r, std::uint64_t n) {
  if (r <= 0) throw std::invalid_argument("p_rn_float: r must be positive");
  if (r > 1'000'000'000) return p_rn_float_clamped(0, true, n);
  return p_rn_float_clamped(r.convert_to<std::uint64_t>(), false, n);
}

ProbValue ProbValue::exact(Rational q) {
  ProbValue v;
  v.exact_ = true;
  v.q_ = std::move(q);
  return v;
}

ProbValue ProbValue::approx(double f) {
  ProbValue v;
  v.exact_ = false;
  v.f_ = f;
  return v;
}

const Rational& ProbValue::rational() const {
  if (!exact_) throw std::logic_error("ProbValue: not exact");
  return q_;
}

double ProbValue::to_double() const {
  return exact_ ? q_.convert_to<double>() : f_;
}

ProbValue ProbValue::absorb(const ProbValue& a) const {
  if (exact_ && a.exact_) return exact(q_ + (1 - q_) * a.q_);
  double s = to_double();
  return approx(s + (1.0 - s) * a.to_double());
}

ProbValue ProbValue::times(const ProbValue& a) const {
  if (exact_ && a.exact_) return exact(q_ * a.q_);
  return approx(to_double() * a.to_double());
}

ProbValue ProbValue::complement() const {
  return exact_ ? exact(1 - q_) : approx(1.0 - f_);
}

ProbValue p_k(std::uint64_t n, std::uint64_t k) {
  BigInt r = r_k(n, k);
  if (r <= 20) {
    return ProbValue::exact(
        p_rn_exact({n, r.convert_to<std::uint64_t>()}));
  }
  return ProbValue::approx(p_rn_float(r, n));
}

BoundCheck check_limit_bound(const WreathParams& params) {
  BoundCheck out;
  double p = params.r <= 20 ? p_rn_exact(params).convert_to<double>()
                            : p_rn_float(params.r, params.n);
  double target = 1.0 - std::exp(-1.0 / static_cast<double>(params.n));
  out.lhs = std::abs(p - target);
  out.rhs = Rational(BigInt(1) + bigint_pow(BigInt(2), params.r),
                     factorial(params.r))
                .convert_to<double>();
  out.ok = out.lhs < out.rhs;
  return out;
}

bool check_variance_bound(std::uint64_t n, std::uint64_t k) {
  ProbValue p = p_k(n, k);
  if (p.is_exact()) {
    const Rational& q = p.rational();
    Rational lhs = q * (1 - q) - Rational(1, n);
    if (lhs < 0) lhs = -lhs;
    return lhs < Rational(121, BigInt(n) * n);
  }
  double q = p.to_double();
  double lhs = std::abs(q * (1.0 - q) - 1.0 / static_cast<double>(n));
  return lhs < 121.0 / (static_cast<double>(n) * static_cast<double>(n));
}

namespace {

ProbValue progression_term(const ProgressionSpec& spec, std::size_t i) {
  std::uint64_t b = spec.start + (i - 1) * spec.step;
  ProbValue p = p_k(b, spec.k);
  // a_i = 2 P (1 - P)
  if (p.is_exact()) {
    const Rational& q = p.rational();
    return ProbValue::exact(2 * q * (1 - q));
  }
  double q = p.to_double();
  return ProbValue::approx(2.0 * q * (1.0 - q));
}

}  // namespace

std::vector<ProbValue> s_sequence(const ProgressionSpec& spec) {
  if (spec.start == 0 || spec.step == 0 || spec.k < 2) {
    throw std::invalid_argument("s_sequence: invalid progression");
  }
  std::vector<ProbValue> s;
  s.reserve(spec.length + 1);
  s.push_back(ProbValue::exact(Rational(0)));
  for (std::size_t i = 1; i <= spec.length; ++i) {
    s.push_back(s.back().absorb(progression_term(spec, i)));
  }
  return s;
}

ProbValue s_closed_form(const ProgressionSpec& spec) {
  ProbValue prod = ProbValue::exact(Rational(1));
  for (std::size_t i = 1; i <= spec.length; ++i) {
    prod = prod.times(progression_term(spec, i).complement());
  }
  return prod.complement();
}

double recurrence_limit_probe(const std::function<double(std::size_t)>& a,
                              double t0, std::size_t steps) {
  if (t0 < 0 || t0 > 1) {
    throw std::invalid_argument("recurrence_limit_probe: t0 outside [0,1]");
  }
  double t = t0;
  for (std::size_t i = 1; i <= steps; ++i) {
    double ai = a(i);
    if (ai < 0 || ai > 1) {
      throw std::invalid_argument("recurrence_limit_probe: a_n outside [0,1]");
    }
    t = t + ai * (1.0 - t);
  }
  return t;
}

Rational s_brute(const ProgressionSpec& spec) {
  if (spec.start == 0 || spec.step == 0 || spec.k < 2) {
    throw std::invalid_argument("s_brute: invalid progression");
  }
  // Classify every element of each factor group once, then walk the
  // tuple odometer over pairs.
  struct Factor {
    std::vector<bool> fix;  // has_fixed_point per element, enumeration order
  };
  std::vector<Factor> factors;
  BigInt tuples = 1;
  for (std::size_t i = 1; i <= spec.length; ++i) {
    std::uint64_t b = spec.start + (i - 1) * spec.step;
    BigInt r_big = r_k(b, spec.k);
    if (r_big > 12) {
      throw std::invalid_argument("s_brute: factor group too large");
    }
    WreathParams params{b, r_big.convert_to<std::uint64_t>()};
    BigInt order = group_order(params);
    tuples *= order * order;
    if (tuples > 10'000'000) {
      throw std::invalid_argument("s_brute: tuple count exceeds 10^7");
    }
    Factor factor;
    WreathElement sigma;
    sigma.perm.resize(params.r);
    std::iota(sigma.perm.begin(), sigma.perm.end(), 0);
    do {
      sigma.shifts.assign(params.r, 0);
      for (;;) {
        factor.fix.push_back(has_fixed_point(sigma, params));
        std::size_t pos = 0;
        while (pos < params.r && ++sigma.shifts[pos] == params.n) {
          sigma.shifts[pos++] = 0;
        }
        if (pos == params.r) break;
      }
    } while (std::next_permutation(sigma.perm.begin(), sigma.perm.end()));
    factors.push_back(std::move(factor));
  }
  if (spec.length == 0) return Rational(0);
  std::vector<std::size_t> sig(spec.length, 0), tau(spec.length, 0);
  BigInt hit = 0;
  for (;;) {
    bool in_union = false;
    for (std::size_t i = 0; i < spec.length; ++i) {
      if (factors[i].fix[sig[i]] != factors[i].fix[tau[i]]) {
        in_union = true;
        break;
      }
    }
    if (in_union) ++hit;
    // odometer over all (sigma_i, tau_i) indices
    std::size_t pos = 0;
    while (pos < spec.length) {
      if (++tau[pos] < factors[pos].fix.size()) break;
      tau[pos] = 0;
      if (++sig[pos] < factors[pos].fix.size()) break;
      sig[pos] = 0;
      ++pos;
    }
    if (pos == spec.length) break;
  }
  return Rational(hit, tuples);
}

}  // namespace dynadist
