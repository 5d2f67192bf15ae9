#include "dynadist/dynatomic.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "dynadist/graph.hpp"

namespace dynadist {

namespace {

void check_degree_cap(int deg, unsigned n, std::uint64_t cap, const char* who) {
  if (deg < 2) return;
  long double bound = 1;
  for (unsigned i = 0; i < n; ++i) {
    bound *= deg;
    if (bound > static_cast<long double>(cap)) {
      throw std::invalid_argument(std::string(who) +
                                  ": (deg f)^n exceeds degree cap");
    }
  }
}

}  // namespace

IntPoly dynatomic_int(const IntPoly& f, unsigned n, std::uint64_t degree_cap) {
  if (n == 0) throw std::invalid_argument("dynatomic_int: n must be positive");
  if (!f.is_monic() || f.degree() < 2) {
    throw std::invalid_argument("dynatomic_int: f must be monic of degree >= 2");
  }
  check_degree_cap(f.degree(), n, degree_cap, "dynatomic_int");
  const IntPoly x = IntPoly::x();
  IntPoly num = IntPoly::constant(1);
  IntPoly den = IntPoly::constant(1);
  IntPoly iterate = f;  // f^d, advanced divisor by divisor
  std::uint64_t at = 1;
  for (std::uint64_t d : divisors(n)) {
    while (at < d) {
      iterate = IntPoly::compose(f, iterate);
      ++at;
    }
    int mu = moebius(n / d);
    if (mu == 1) {
      num = num * (iterate - x);
    } else if (mu == -1) {
      den = den * (iterate - x);
    }
  }
  return IntPoly::divrem_exact(num, den);
}

ModPoly dynatomic_mod(const DynatomicSpec& spec, std::uint64_t p,
                      std::uint64_t degree_cap) {
  if (spec.n == 0) throw std::invalid_argument("dynatomic_mod: n must be positive");
  if (spec.k < 2) throw std::invalid_argument("dynatomic_mod: k must be at least 2");
  const ModPoly f = reduce_mod_p(spec.map(), p);
  check_degree_cap(f.degree(), spec.n, degree_cap, "dynatomic_mod");
  const ModPoly x = ModPoly::x(p);
  ModPoly num = ModPoly::constant(p, 1);
  ModPoly den = ModPoly::constant(p, 1);
  ModPoly iterate = f;
  std::uint64_t at = 1;
  for (std::uint64_t d : divisors(spec.n)) {
    while (at < d) {
      iterate = ModPoly::compose(f, iterate);
      ++at;
    }
    int mu = moebius(spec.n / d);
    if (mu == 1) {
      num = num * (iterate - x);
    } else if (mu == -1) {
      den = den * (iterate - x);
    }
  }
  // f is monic, so the numerator is an exact multiple of the denominator
  // in F_p[x]; a nonzero remainder means the construction is broken.
  try {
    return ModPoly::divrem_exact(num, den);
  } catch (const std::invalid_argument&) {
    throw std::logic_error("dynatomic_mod: exact division failed");
  }
}

std::optional<std::uint64_t> period_of(const ModPoly& f, std::uint64_t alpha) {
  const std::uint64_t p = f.modulus();
  alpha %= p;
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t v = alpha;
  for (std::uint64_t steps = 1; steps <= p; ++steps) {
    v = f.eval(v);
    if (v == alpha) return steps;
    if (!seen.insert(v).second) return std::nullopt;  // cycled without alpha
  }
  return std::nullopt;
}

std::uint64_t period_dividing(const ModPoly& f, std::uint64_t alpha, unsigned n) {
  std::uint64_t v = alpha % f.modulus();
  for (unsigned t = 1; t <= n; ++t) {
    v = f.eval(v);
    if (v == alpha) return t;
  }
  throw std::invalid_argument("period_dividing: f^n(alpha) != alpha");
}

std::pair<std::uint64_t, std::uint64_t> multiplier(const ModPoly& f,
                                                   std::uint64_t alpha) {
  auto m = period_of(f, alpha);
  if (!m) throw std::invalid_argument("multiplier: alpha is not periodic");
  const std::uint64_t p = f.modulus();
  const ModPoly df = f.derivative();
  std::uint64_t lambda = 1 % p;
  std::uint64_t v = alpha % p;
  for (std::uint64_t i = 0; i < *m; ++i) {
    lambda = mul_mod(lambda, df.eval(v), p);
    v = f.eval(v);
  }
  return {*m, lambda};
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw std::invalid_argument("multiplicative_order: zero element");
  std::uint64_t order = p - 1;
  std::uint64_t rest = p - 1;
  for (std::uint64_t q = 2; q * q <= rest; ++q) {
    if (rest % q != 0) continue;
    while (rest % q == 0) rest /= q;
    while (order % q == 0 && pow_mod(a, order / q, p) == 1) order /= q;
  }
  if (rest > 1) {
    while (order % rest == 0 && pow_mod(a, order / rest, p) == 1) order /= rest;
  }
  return order;
}

RootClassification classify_root(const DynatomicSpec& spec, std::uint64_t p,
                                 std::uint64_t alpha) {
  const ModPoly phi = dynatomic_mod(spec, p);
  alpha %= p;
  if (phi.eval(alpha) != 0) {
    throw std::invalid_argument("classify_root: alpha is not a root");
  }
  const ModPoly f = reduce_mod_p(spec.map(), p);
  RootClassification out;
  out.alpha = alpha;
  // Phi_n divides f^n - x, so alpha is periodic with period dividing n.
  out.period = period_dividing(f, alpha, spec.n);
  out.lambda = multiplier(f, alpha).second;
  if (out.period == spec.n) {
    out.kind = RootCase::EqualPeriod;
    return out;
  }
  if (out.lambda == 0 || spec.n % out.period != 0) {
    throw std::logic_error("classify_root: no classification case matches");
  }
  out.j = multiplicative_order(out.lambda, p);
  std::uint64_t rest = spec.n / out.period;
  if (rest % out.j != 0) {
    throw std::logic_error("classify_root: no classification case matches");
  }
  rest /= out.j;
  if (rest == 1) {
    out.kind = RootCase::RootOfUnity;
    return out;
  }
  while (rest % p == 0) {
    rest /= p;
    ++out.e;
  }
  if (rest != 1 || out.e == 0) {
    throw std::logic_error("classify_root: no classification case matches");
  }
  out.kind = RootCase::CharPower;
  return out;
}

namespace {

// A constant gcd(g, g') mod q (q prime, q not dividing the leading
// coefficient) forces the gcd over Q to be constant.
bool modular_squarefree_certificate(const IntPoly& g, std::uint64_t q) {
  ModPoly gq = reduce_mod_p(g, q);
  if (gq.degree() != g.degree()) return false;  // leading coefficient died
  ModPoly d = gq.derivative();
  if (d.is_zero()) return false;
  return gcd_mod(gq, d).degree() == 0;
}

// Exact gcd(g, g') over Q for small degrees, done with rational
// coefficients.
bool exact_squarefree(const IntPoly& g) {
  std::vector<Rational> u(g.coeffs().begin(), g.coeffs().end());
  IntPoly dg = g.derivative();
  std::vector<Rational> v(dg.coeffs().begin(), dg.coeffs().end());
  auto deg = [](const std::vector<Rational>& a) {
    return static_cast<int>(a.size()) - 1;
  };
  auto trim = [](std::vector<Rational>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  };
  trim(u);
  trim(v);
  while (!v.empty()) {
    // u mod v
    while (deg(u) >= deg(v)) {
      Rational q = u.back() / v.back();
      std::size_t shift = u.size() - v.size();
      for (std::size_t i = 0; i < v.size(); ++i) u[shift + i] -= q * v[i];
      trim(u);
      if (u.empty()) break;
    }
    std::swap(u, v);
  }
  return deg(u) == 0;
}

}  // namespace

SquarefreeResult iterate_squarefree(const IntPoly& f, unsigned n,
                                    std::uint64_t degree_cap) {
  // Fixed set of large certificate primes; all of them dividing the
  // discriminant would take a discriminant beyond 2^240.
  static constexpr std::uint64_t kCertPrimes[] = {
      1073741827ull, 1073741831ull, 1073741833ull, 1073741839ull,
      1073741843ull, 1073741857ull, 1073741891ull, 1073741909ull};
  const IntPoly g = IntPoly::iterate(f, n, degree_cap) - IntPoly::x();
  for (std::uint64_t q : kCertPrimes) {
    if (modular_squarefree_certificate(g, q)) return SquarefreeResult::Squarefree;
  }
  if (g.degree() <= 64) {
    return exact_squarefree(g) ? SquarefreeResult::Squarefree
                               : SquarefreeResult::NotSquarefree;
  }
  return SquarefreeResult::ProbablyNotSquarefree;
}

PeriodProbe probe_prime(const DynatomicSpec& spec, std::uint64_t p,
                        std::uint64_t graph_threshold,
                        std::uint64_t roots_seed) {
  PeriodProbe out;
  const ModPoly phi = dynatomic_mod(spec, p);
  out.root_exists = phi.degree() >= 1 && has_root_mod_p(phi);
  if (p <= graph_threshold) {
    FunctionalGraph g = build_graph(spec.map(), p, {graph_threshold, 1});
    out.period_exists = cycle_spectrum(g).has_length(spec.n);
    return out;
  }
  if (!out.root_exists) {
    // Every period-n point is a root of the dynatomic polynomial, so no
    // roots means no period-n cycle either.
    out.period_exists = false;
    return out;
  }
  RootsOptions opts;
  opts.exhaustive_threshold = 1u << 12;
  opts.seed = roots_seed;
  const ModPoly f = reduce_mod_p(spec.map(), p);
  for (std::uint64_t alpha : roots_mod_p(phi, opts)) {
    if (period_dividing(f, alpha, spec.n) == spec.n) {
      out.period_exists = true;
      break;
    }
  }
  return out;
}

std::vector<std::uint64_t> exceptional_primes(const DynatomicSpec& spec,
                                              std::uint64_t x,
                                              const ExceptionalScanOptions& opts) {
  SquarefreeResult sf = iterate_squarefree(spec.map(), spec.n);
  if (sf != SquarefreeResult::Squarefree) {
    throw SquarefreeViolation(
        sf == SquarefreeResult::NotSquarefree
            ? "exceptional_primes: f^n(x) - x has repeated roots"
            : "exceptional_primes: f^n(x) - x squarefree check inconclusive");
  }
  std::vector<std::uint64_t> primes = primes_up_to(x);
  unsigned threads = opts.threads ? opts.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, 8);
  std::vector<std::vector<std::uint64_t>> found(threads);
  auto worker = [&](unsigned t) {
    for (std::size_t i = t; i < primes.size(); i += threads) {
      PeriodProbe probe = probe_prime(spec, primes[i], opts.graph_threshold);
      if (probe.root_exists != probe.period_exists) found[t].push_back(primes[i]);
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  std::vector<std::uint64_t> out;
  for (auto& part : found) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dynadist
