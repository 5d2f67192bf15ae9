#include "dynadist/mod_poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dynadist {

namespace {
using u128 = unsigned __int128;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw std::invalid_argument("inv_mod: zero has no inverse");
  return pow_mod(a, p - 2, p);
}

ModPoly::ModPoly(std::uint64_t p) : p_(p) {
  if (p < 2) throw std::invalid_argument("ModPoly: modulus must be at least 2");
}

ModPoly::ModPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs)
    : p_(p), coeffs_(std::move(coeffs)) {
  if (p < 2) throw std::invalid_argument("ModPoly: modulus must be at least 2");
  for (auto& c : coeffs_) c %= p_;
  normalize();
}

ModPoly ModPoly::constant(std::uint64_t p, std::uint64_t c) {
  return ModPoly(p, {c});
}

ModPoly ModPoly::x(std::uint64_t p) { return ModPoly(p, {0, 1}); }

ModPoly ModPoly::linear_root(std::uint64_t p, std::uint64_t a) {
  return ModPoly(p, {(p - a % p) % p, 1});
}

void ModPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

void ModPoly::check_same(const ModPoly& other) const {
  if (p_ != other.p_) throw std::invalid_argument("ModPoly: modulus mismatch");
}

ModPoly operator+(const ModPoly& a, const ModPoly& b) {
  a.check_same(b);
  ModPoly out(a.p_);
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    std::uint64_t s = a.coeff(i) + b.coeff(i);
    out.coeffs_[i] = s >= a.p_ ? s - a.p_ : s;
  }
  out.normalize();
  return out;
}

ModPoly operator-(const ModPoly& a, const ModPoly& b) {
  a.check_same(b);
  ModPoly out(a.p_);
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    std::uint64_t x = a.coeff(i);
    std::uint64_t y = b.coeff(i);
    out.coeffs_[i] = x >= y ? x - y : x + a.p_ - y;
  }
  out.normalize();
  return out;
}

ModPoly operator*(const ModPoly& a, const ModPoly& b) {
  a.check_same(b);
  ModPoly out(a.p_);
  if (a.is_zero() || b.is_zero()) return out;
  const std::uint64_t p = a.p_;
  out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  if (p < (1ull << 32)) {
    // Products fit 64 bits; a 128-bit accumulator cannot overflow for
    // any realistic length.
    for (std::size_t t = 0; t < out.coeffs_.size(); ++t) {
      u128 acc = 0;
      std::size_t lo = t >= b.coeffs_.size() ? t - b.coeffs_.size() + 1 : 0;
      std::size_t hi = std::min(t, a.coeffs_.size() - 1);
      for (std::size_t i = lo; i <= hi; ++i) {
        acc += static_cast<u128>(a.coeffs_[i]) * b.coeffs_[t - i];
      }
      out.coeffs_[t] = static_cast<std::uint64_t>(acc % p);
    }
  } else {
    for (std::size_t t = 0; t < out.coeffs_.size(); ++t) {
      std::uint64_t acc = 0;
      std::size_t lo = t >= b.coeffs_.size() ? t - b.coeffs_.size() + 1 : 0;
      std::size_t hi = std::min(t, a.coeffs_.size() - 1);
      for (std::size_t i = lo; i <= hi; ++i) {
        std::uint64_t prod = mul_mod(a.coeffs_[i], b.coeffs_[t - i], p);
        acc += prod;
        if (acc < prod || acc >= p) acc -= p;  // wrap-safe modular add
      }
      out.coeffs_[t] = acc;
    }
  }
  out.normalize();
  return out;
}

ModPoly ModPoly::derivative() const {
  ModPoly out(p_);
  if (coeffs_.size() <= 1) return out;
  out.coeffs_.resize(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    out.coeffs_[i - 1] = mul_mod(coeffs_[i], i % p_, p_);
  }
  out.normalize();
  return out;
}

std::uint64_t ModPoly::eval(std::uint64_t a) const {
  a %= p_;
  std::uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = (mul_mod(acc, a, p_) + *it) % p_;
  }
  return acc;
}

ModPoly ModPoly::monic() const {
  if (is_zero() || coeffs_.back() == 1) return *this;
  ModPoly out(p_);
  out.coeffs_.resize(coeffs_.size());
  std::uint64_t inv = inv_mod(coeffs_.back(), p_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    out.coeffs_[i] = mul_mod(coeffs_[i], inv, p_);
  }
  return out;
}

ModPoly ModPoly::compose(const ModPoly& outer, const ModPoly& inner) {
  outer.check_same(inner);
  ModPoly acc(outer.p_);
  for (auto it = outer.coeffs_.rbegin(); it != outer.coeffs_.rend(); ++it) {
    acc = acc * inner + constant(outer.p_, *it);
  }
  return acc;
}

ModPoly ModPoly::iterate(const ModPoly& f, unsigned n, std::uint64_t degree_cap) {
  if (n == 0) throw std::invalid_argument("iterate: n must be positive");
  if (f.degree() >= 2) {
    long double bound = 1;
    for (unsigned i = 0; i < n; ++i) {
      bound *= f.degree();
      if (bound > static_cast<long double>(degree_cap)) {
        throw std::invalid_argument("iterate: (deg f)^n exceeds degree cap");
      }
    }
  }
  ModPoly acc = f;
  for (unsigned i = 1; i < n; ++i) acc = compose(f, acc);
  return acc;
}

std::pair<ModPoly, ModPoly> ModPoly::divrem(const ModPoly& num,
                                            const ModPoly& den) {
  num.check_same(den);
  if (den.is_zero()) throw std::invalid_argument("divrem: division by zero");
  const std::uint64_t p = num.p_;
  if (num.degree() < den.degree()) return {ModPoly(p), num};
  std::vector<std::uint64_t> rem = num.coeffs_;
  std::size_t dd = den.coeffs_.size() - 1;
  std::uint64_t lead_inv = inv_mod(den.coeffs_.back(), p);
  std::vector<std::uint64_t> quot(rem.size() - dd, 0);
  for (std::size_t i = rem.size(); i-- > dd;) {
    if (rem[i] == 0) continue;
    std::uint64_t q = mul_mod(rem[i], lead_inv, p);
    rem[i] = 0;
    for (std::size_t j = 0; j < dd; ++j) {
      std::uint64_t sub = mul_mod(q, den.coeffs_[j], p);
      std::uint64_t& target = rem[i - dd + j];
      target = target >= sub ? target - sub : target + p - sub;
    }
    quot[i - dd] = q;
  }
  return {ModPoly(p, std::move(quot)), ModPoly(p, std::move(rem))};
}

ModPoly ModPoly::divrem_exact(const ModPoly& num, const ModPoly& den) {
  if (!den.is_monic()) {
    throw std::invalid_argument("divrem_exact: divisor must be monic");
  }
  auto [q, r] = divrem(num, den);
  if (!r.is_zero()) {
    throw std::invalid_argument("divrem_exact: nonzero remainder");
  }
  return q;
}

std::string ModPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ',';
    os << coeffs_[i];
  }
  return os.str();
}

ModPoly reduce_mod_p(const IntPoly& f, std::uint64_t p) {
  std::vector<std::uint64_t> coeffs(f.coeffs().size());
  const BigInt bp = p;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    BigInt r = f.coeffs()[i] % bp;
    if (r < 0) r += bp;
    coeffs[i] = r.convert_to<std::uint64_t>();
  }
  return ModPoly(p, std::move(coeffs));
}

ModPoly gcd_mod(const ModPoly& a, const ModPoly& b) {
  if (a.is_zero() && b.is_zero()) {
    throw std::invalid_argument("gcd_mod: both inputs zero");
  }
  ModPoly u = a, v = b;
  while (!v.is_zero()) {
    ModPoly r = ModPoly::divrem(u, v).second;
    u = std::move(v);
    v = std::move(r);
  }
  return u.monic();
}

ModPoly pow_mod_poly(const ModPoly& base, std::uint64_t e, const ModPoly& h) {
  if (base.modulus() != h.modulus()) {
    throw std::invalid_argument("pow_mod_poly: modulus mismatch");
  }
  if (h.degree() < 1) {
    throw std::invalid_argument("pow_mod_poly: modulus polynomial must have degree >= 1");
  }
  ModPoly result = ModPoly::constant(base.modulus(), 1);
  ModPoly b = ModPoly::divrem(base, h).second;
  while (e > 0) {
    if (e & 1) result = ModPoly::divrem(result * b, h).second;
    b = ModPoly::divrem(b * b, h).second;
    e >>= 1;
  }
  return result;
}

ModPoly frobenius_power(const ModPoly& h, std::uint64_t e) {
  return pow_mod_poly(ModPoly::x(h.modulus()), e, h);
}

bool has_root_mod_p(const ModPoly& h) {
  if (h.is_zero()) throw std::invalid_argument("has_root_mod_p: zero polynomial");
  const std::uint64_t p = h.modulus();
  if (h.degree() == 0) return false;
  if (p == 2) return h.eval(0) == 0 || h.eval(1) == 0;
  if (h.coeff(0) == 0) return true;
  ModPoly xp = frobenius_power(h, p);
  ModPoly diff = xp - ModPoly::x(p);
  if (diff.is_zero()) return true;  // h divides x^p - x: splits into linears
  return gcd_mod(diff, h).degree() >= 1;
}

namespace {

// Splits a monic product of distinct linear factors into roots.
void split_linear_product(const ModPoly& g, SplitMix64& rng,
                          std::vector<std::uint64_t>& out) {
  const std::uint64_t p = g.modulus();
  if (g.degree() < 1) return;
  if (g.degree() == 1) {
    out.push_back((p - g.coeff(0)) % p);
    return;
  }
  // g(x) | x^p - x and p is odd here; gcd with (x + delta)^((p-1)/2) - 1
  // separates roots by quadratic character of root + delta.
  for (;;) {
    std::uint64_t delta = rng.below(p);
    ModPoly shifted(p, {delta, 1});
    ModPoly e = pow_mod_poly(shifted, (p - 1) / 2, g);
    ModPoly d = gcd_mod(e - ModPoly::constant(p, 1), g);
    if (d.degree() >= 1 && d.degree() < g.degree()) {
      split_linear_product(d, rng, out);
      split_linear_product(ModPoly::divrem_exact(g, d), rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> roots_mod_p(const ModPoly& h, const RootsOptions& opts) {
  if (h.is_zero()) throw std::invalid_argument("roots_mod_p: zero polynomial");
  const std::uint64_t p = h.modulus();
  std::vector<std::uint64_t> roots;
  if (h.degree() == 0) return roots;
  if (p <= opts.exhaustive_threshold || p == 2) {
    for (std::uint64_t a = 0; a < p; ++a) {
      if (h.eval(a) == 0) roots.push_back(a);
    }
    return roots;
  }
  ModPoly xp = frobenius_power(h, p);
  ModPoly diff = xp - ModPoly::x(p);
  ModPoly linear_part = diff.is_zero() ? h.monic() : gcd_mod(diff, h);
  if (linear_part.degree() < 1) return roots;
  // If x appears as a factor, peel it off so the splitter sees a product
  // of x - a with a != 0.
  if (linear_part.coeff(0) == 0) {
    roots.push_back(0);
    linear_part = ModPoly::divrem_exact(linear_part, ModPoly::x(p));
  }
  SplitMix64 rng(opts.seed ^ (p * 0x9e3779b97f4a7c15ull));
  split_linear_product(linear_part, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace dynadist
