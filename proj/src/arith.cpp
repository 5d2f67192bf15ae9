#include "dynadist/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynadist {

int moebius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("moebius: n must be positive");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors: n must be positive");
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

BigInt bigint_pow(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

BigInt r_k(std::uint64_t n, std::uint64_t k) {
  if (n == 0) throw std::invalid_argument("r_k: n must be positive");
  if (k < 2) throw std::invalid_argument("r_k: k must be at least 2");
  BigInt sum = 0;
  for (std::uint64_t d : divisors(n)) {
    sum += moebius(n / d) * bigint_pow(BigInt(k), d);
  }
  if (sum % n != 0) {
    throw std::logic_error("r_k: divisor sum not divisible by n");
  }
  return sum / n;
}

BigInt derangements(std::uint64_t i) {
  BigInt prev2 = 1;  // D_0
  if (i == 0) return prev2;
  BigInt prev1 = 0;  // D_1
  for (std::uint64_t j = 2; j <= i; ++j) {
    BigInt cur = (j - 1) * (prev1 + prev2);
    prev2 = std::move(prev1);
    prev1 = std::move(cur);
  }
  return prev1;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt rencontres(std::uint64_t r, std::uint64_t i) {
  if (i > r) throw std::invalid_argument("rencontres: i must not exceed r");
  return binomial(r, i) * derangements(r - i);
}

namespace {

std::vector<std::uint32_t> simple_sieve(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return primes;
}

}  // namespace

PrimeStream::PrimeStream(std::uint64_t lo, std::uint64_t hi) : hi_(hi) {
  cursor_ = std::max<std::uint64_t>(lo, 2);
  if (cursor_ > hi_) return;
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi_)));
  while (root * root > hi_) --root;
  while ((root + 1) * (root + 1) <= hi_) ++root;
  base_ = simple_sieve(root);
  load_segment(cursor_);
}

void PrimeStream::load_segment(std::uint64_t seg_lo) {
  seg_lo_ = seg_lo;
  std::uint64_t span = std::min<std::uint64_t>(kSpan, hi_ - seg_lo_ + 1);
  composite_.assign(span, false);
  for (std::uint32_t bp : base_) {
    std::uint64_t p = bp;
    std::uint64_t start = std::max(p * p, (seg_lo_ + p - 1) / p * p);
    for (std::uint64_t q = start; q < seg_lo_ + span; q += p) {
      composite_[q - seg_lo_] = true;
    }
  }
}

bool PrimeStream::next(std::uint64_t& p) {
  while (cursor_ <= hi_) {
    if (cursor_ >= seg_lo_ + composite_.size()) load_segment(cursor_);
    std::uint64_t v = cursor_++;
    if (!composite_[v - seg_lo_]) {
      p = v;
      return true;
    }
  }
  return false;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  if (x < 2) return out;
  PrimeStream stream(x);
  std::uint64_t p;
  while (stream.next(p)) out.push_back(p);
  return out;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn) {
  PrimeStream stream(lo, hi);
  std::uint64_t p;
  while (stream.next(p)) fn(p);
}

}  // namespace dynadist
