#include "dynadist/int_poly.hpp"

#include <sstream>
#include <stdexcept>

namespace dynadist {

namespace {
const BigInt kZero = 0;
}

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

IntPoly::IntPoly(std::initializer_list<long long> coeffs) {
  coeffs_.assign(coeffs.begin(), coeffs.end());
  normalize();
}

IntPoly IntPoly::constant(BigInt c) {
  IntPoly p;
  if (c != 0) p.coeffs_.push_back(std::move(c));
  return p;
}

IntPoly IntPoly::x() {
  IntPoly p;
  p.coeffs_ = {0, 1};
  return p;
}

IntPoly IntPoly::power_map(std::uint64_t k, const BigInt& m) {
  if (k == 0) throw std::invalid_argument("power_map: k must be positive");
  IntPoly p;
  p.coeffs_.assign(k + 1, 0);
  p.coeffs_[0] = m;
  p.coeffs_[k] = 1;
  return p;
}

void IntPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const BigInt& IntPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : kZero;
}

const BigInt& IntPoly::leading() const {
  if (coeffs_.empty()) throw std::logic_error("leading: zero polynomial");
  return coeffs_.back();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  IntPoly out;
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    out.coeffs_[i] = a.coeff(i) + b.coeff(i);
  }
  out.normalize();
  return out;
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  IntPoly out;
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    out.coeffs_[i] = a.coeff(i) - b.coeff(i);
  }
  out.normalize();
  return out;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  IntPoly out;
  out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  out.normalize();
  return out;
}

IntPoly IntPoly::derivative() const {
  IntPoly out;
  if (coeffs_.size() <= 1) return out;
  out.coeffs_.resize(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    out.coeffs_[i - 1] = coeffs_[i] * i;
  }
  out.normalize();
  return out;
}

BigInt IntPoly::eval(const BigInt& a) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * a + *it;
  }
  return acc;
}

IntPoly IntPoly::compose(const IntPoly& outer, const IntPoly& inner) {
  IntPoly acc;
  for (auto it = outer.coeffs_.rbegin(); it != outer.coeffs_.rend(); ++it) {
    acc = acc * inner + constant(*it);
  }
  return acc;
}

IntPoly IntPoly::iterate(const IntPoly& f, unsigned n, std::uint64_t degree_cap) {
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
  IntPoly acc = f;
  for (unsigned i = 1; i < n; ++i) acc = compose(f, acc);
  return acc;
}

IntPoly IntPoly::divrem_exact(const IntPoly& num, const IntPoly& den) {
  if (!den.is_monic()) {
    throw std::invalid_argument("divrem_exact: divisor must be monic");
  }
  if (num.degree() < den.degree()) {
    if (num.is_zero()) return IntPoly();
    throw std::invalid_argument("divrem_exact: nonzero remainder");
  }
  std::vector<BigInt> rem = num.coeffs_;
  std::size_t dd = den.coeffs_.size() - 1;
  std::vector<BigInt> quot(rem.size() - dd, 0);
  for (std::size_t i = rem.size(); i-- > dd;) {
    if (rem[i] == 0) continue;
    BigInt q = std::move(rem[i]);
    rem[i] = 0;
    for (std::size_t j = 0; j < dd; ++j) {
      rem[i - dd + j] -= q * den.coeffs_[j];
    }
    quot[i - dd] = std::move(q);
  }
  for (const BigInt& c : rem) {
    if (c != 0) throw std::invalid_argument("divrem_exact: nonzero remainder");
  }
  return IntPoly(std::move(quot));
}

std::string IntPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ',';
    os << coeffs_[i];
  }
  return os.str();
}

IntPoly IntPoly::parse(std::string_view text) {
  std::vector<BigInt> coeffs;
  std::string token;
  std::istringstream is{std::string(text)};
  while (std::getline(is, token, ',')) {
    std::size_t a = token.find_first_not_of(" \t");
    std::size_t b = token.find_last_not_of(" \t");
    if (a == std::string::npos) {
      throw std::invalid_argument("parse: empty coefficient");
    }
    coeffs.emplace_back(token.substr(a, b - a + 1));
  }
  if (coeffs.empty()) throw std::invalid_argument("parse: empty polynomial text");
  return IntPoly(std::move(coeffs));
}

}  // namespace dynadist
