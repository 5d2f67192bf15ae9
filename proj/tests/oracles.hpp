// Brute-force reference computations used to derive and pin expected
// values. Everything here is deliberately naive and independent of the
// library's algorithmic paths.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dynadist/graph.hpp"
#include "dynadist/int_poly.hpp"
#include "dynadist/mod_poly.hpp"

namespace oracle {

// Permutations of {0..n-1} with no fixed point, by enumeration.
inline std::uint64_t count_derangements(unsigned n) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::uint64_t count = 0;
  do {
    bool fixed = false;
    for (unsigned i = 0; i < n; ++i) fixed = fixed || perm[i] == i;
    count += !fixed;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// Permutations of {0..n-1} with exactly k fixed points.
inline std::uint64_t count_with_fixed_points(unsigned n, unsigned k) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::uint64_t count = 0;
  do {
    unsigned fixed = 0;
    for (unsigned i = 0; i < n; ++i) fixed += perm[i] == i;
    count += fixed == k;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// All roots of h over F_p by direct evaluation.
inline std::vector<std::uint64_t> roots_exhaustive(const dynadist::ModPoly& h) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < h.modulus(); ++a) {
    if (h.eval(a) == 0) out.push_back(a);
  }
  return out;
}

// Vertices on cycles of length exactly n: iterate every vertex up to p
// steps and look for the first return.
inline std::vector<std::uint32_t> period_points_brute(
    const dynadist::FunctionalGraph& g, std::uint64_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < g.image.size(); ++v) {
    std::uint32_t w = v;
    for (std::uint64_t step = 1; step <= g.image.size(); ++step) {
      w = g.image[w];
      if (w == v) {
        if (step == n) out.push_back(v);
        break;
      }
    }
  }
  return out;
}

// Naive polynomial product over Z, used to certify exact divisions.
inline dynadist::IntPoly naive_mul(const dynadist::IntPoly& a,
                                   const dynadist::IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<dynadist::BigInt> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      c[i + j] += a.coeffs()[i] * b.coeffs()[j];
    }
  }
  return dynadist::IntPoly(std::move(c));
}

}  // namespace oracle
