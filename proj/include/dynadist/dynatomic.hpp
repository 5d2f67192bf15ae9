#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dynadist/int_poly.hpp"
#include "dynadist/mod_poly.hpp"

namespace dynadist {

/// The family x^k + m together with a period n.
struct DynatomicSpec {
  std::uint64_t k = 2;
  long long m = 0;
  unsigned n = 1;

  IntPoly map() const { return IntPoly::power_map(k, BigInt(m)); }
};

/// nth dynatomic polynomial of a monic f with deg f >= 2, over Z:
/// the product of (f^d(x) - x)^mu(n/d) over divisors d of n, formed as
/// an exact quotient of the mu = +1 part by the mu = -1 part.
IntPoly dynatomic_int(const IntPoly& f, unsigned n,
                      std::uint64_t degree_cap = kDefaultDegreeCap);

/// Same construction carried out directly in F_p[x].
ModPoly dynatomic_mod(const DynatomicSpec& spec, std::uint64_t p,
                      std::uint64_t degree_cap = kDefaultDegreeCap);

/// Least period of alpha under f if alpha is periodic, otherwise
/// nullopt. Walks the orbit, which is bounded by p steps.
std::optional<std::uint64_t> period_of(const ModPoly& f, std::uint64_t alpha);

/// Least period of a point known to satisfy f^n(alpha) = alpha; at most
/// n iterations and no orbit bookkeeping.
std::uint64_t period_dividing(const ModPoly& f, std::uint64_t alpha, unsigned n);

/// (period m, multiplier lambda) at a periodic point, with lambda the
/// chain-rule product of f' along the cycle. Rejects non-periodic alpha.
std::pair<std::uint64_t, std::uint64_t> multiplier(const ModPoly& f,
                                                   std::uint64_t alpha);

/// Multiplicative order of a in F_p^* (factors p - 1 by trial division).
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p);

enum class RootCase {
  EqualPeriod,   // n = m
  RootOfUnity,   // n = m * j, multiplier of order j
  CharPower,     // n = m * j * p^e with e >= 1
};

struct RootClassification {
  std::uint64_t alpha = 0;
  std::uint64_t period = 0;      // least period m
  std::uint64_t lambda = 0;      // multiplier at alpha
  RootCase kind = RootCase::EqualPeriod;
  std::uint64_t j = 1;           // order of lambda (1 for EqualPeriod)
  std::uint64_t e = 0;           // p-power exponent (CharPower only)
};

/// Classifies a root alpha of the nth dynatomic polynomial of spec mod p
/// into exactly one of the three period/multiplier cases. Throws
/// std::logic_error if no case matches (cannot happen).
RootClassification classify_root(const DynatomicSpec& spec, std::uint64_t p,
                                 std::uint64_t alpha);

enum class SquarefreeResult {
  Squarefree,             // certified
  NotSquarefree,          // certified (exact gcd path)
  ProbablyNotSquarefree,  // modular certificates all failed
};

/// Whether f^n(x) - x is squarefree over Q. Exact gcd with the
/// derivative for small degrees; for larger ones a constant
/// gcd(g, g') mod q for any good prime q certifies squarefreeness, and
/// only "probably not" can be reported when every certificate fails.
SquarefreeResult iterate_squarefree(const IntPoly& f, unsigned n,
                                    std::uint64_t degree_cap = kDefaultDegreeCap);

/// Raised when a computation requires f^n(x) - x squarefree and the
/// check does not certify it.
class SquarefreeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExceptionalScanOptions {
  /// Primes at or below this build the full functional graph to decide
  /// period-n existence; larger primes go through root extraction and
  /// period checks.
  std::uint64_t graph_threshold = 1u << 16;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// All primes p <= x where root existence of the reduced nth dynatomic
/// polynomial disagrees with existence of a period-n point of the mod-p
/// dynamical system. Requires f^n(x) - x squarefree over Q.
std::vector<std::uint64_t> exceptional_primes(
    const DynatomicSpec& spec, std::uint64_t x,
    const ExceptionalScanOptions& opts = {});

/// Root-existence and period-n-existence for one prime; the building
/// block of exceptional_primes and the density sweeps.
struct PeriodProbe {
  bool root_exists = false;
  bool period_exists = false;
};
PeriodProbe probe_prime(const DynatomicSpec& spec, std::uint64_t p,
                        std::uint64_t graph_threshold,
                        std::uint64_t roots_seed = 0x5eed);

}  // namespace dynadist
