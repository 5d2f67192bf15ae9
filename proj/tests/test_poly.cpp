#include <doctest.h>

#include "dynadist/int_poly.hpp"
#include "dynadist/mod_poly.hpp"
#include "oracles.hpp"

using namespace dynadist;

namespace {

IntPoly random_int_poly(SplitMix64& rng, int max_deg, long long span = 20) {
  std::vector<BigInt> c(rng.below(max_deg + 1) + 1);
  for (auto& x : c) {
    x = static_cast<long long>(rng.below(2 * span + 1)) - span;
  }
  return IntPoly(std::move(c));
}

ModPoly random_mod_poly(SplitMix64& rng, std::uint64_t p, int max_deg) {
  std::vector<std::uint64_t> c(rng.below(max_deg + 1) + 1);
  for (auto& x : c) x = rng.below(p);
  return ModPoly(p, std::move(c));
}

}  // namespace

TEST_CASE("ring basics over Z") {
  IntPoly a{1, 1};   // x + 1
  IntPoly b{-1, 1};  // x - 1
  CHECK(a * b == IntPoly{-1, 0, 1});
  CHECK((a * IntPoly::zero()).is_zero());
  CHECK(a + b == IntPoly{0, 2});
  CHECK(a - a == IntPoly::zero());
  CHECK(IntPoly{0, 0, 0}.is_zero());
  CHECK(IntPoly{5}.degree() == 0);
  CHECK(IntPoly::power_map(2, 3) == IntPoly{3, 0, 1});
}

TEST_CASE("ring basics mod p") {
  ModPoly a(5, {1, 1, 1});
  ModPoly b(5, {4, 4, 1});  // x^2 - x - 1 mod 5
  CHECK(a + b == ModPoly(5, {0, 0, 2}));
  CHECK_THROWS_AS(a + ModPoly(7, {1}), std::invalid_argument);
  ModPoly x1(7, {1, 1});
  ModPoly xm1(7, {6, 1});
  CHECK(x1 * xm1 == ModPoly(7, {6, 0, 1}));
}

TEST_CASE("compose") {
  IntPoly f{1, 0, 1};  // x^2 + 1
  CHECK(IntPoly::compose(f, f) == IntPoly{2, 0, 2, 0, 1});
  CHECK(IntPoly::compose(f, IntPoly::x()) == f);
  CHECK(IntPoly::compose(IntPoly::x(), f) == f);
}

TEST_CASE("compose is associative on random inputs") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    IntPoly f = random_int_poly(rng, 3, 4);
    IntPoly g = random_int_poly(rng, 3, 4);
    IntPoly h = random_int_poly(rng, 2, 4);
    REQUIRE(IntPoly::compose(IntPoly::compose(f, g), h) ==
            IntPoly::compose(f, IntPoly::compose(g, h)));
  }
}

TEST_CASE("iterate") {
  IntPoly f{1, 0, 1};
  CHECK(IntPoly::iterate(f, 1) == f);
  CHECK(IntPoly::iterate(f, 2) == IntPoly{2, 0, 2, 0, 1});
  CHECK(IntPoly::iterate(IntPoly{3, 0, 1}, 2) == IntPoly{12, 0, 6, 0, 1});
  CHECK(IntPoly::iterate(f, 2).degree() == 4);
  CHECK_THROWS_AS(IntPoly::iterate(f, 21, 1u << 20), std::invalid_argument);
  CHECK_THROWS_AS(IntPoly::iterate(f, 0), std::invalid_argument);
}

TEST_CASE("divrem_exact") {
  IntPoly num{12, -1, 6, 0, 1};  // x^4 + 6x^2 - x + 12
  IntPoly den{3, -1, 1};         // x^2 - x + 3
  IntPoly quot = IntPoly::divrem_exact(num, den);
  CHECK(quot == IntPoly{4, 1, 1});  // x^2 + x + 4
  CHECK(oracle::naive_mul(quot, den) == num);
  CHECK(IntPoly::divrem_exact(num, IntPoly{1}) == num);
  CHECK(IntPoly::divrem_exact(IntPoly{-1, 0, 1}, IntPoly{1, 1}) ==
        IntPoly{-1, 1});
  CHECK_THROWS_AS(IntPoly::divrem_exact(IntPoly{1, 1}, IntPoly{0, 2}),
                  std::invalid_argument);  // non-monic
  CHECK_THROWS_AS(IntPoly::divrem_exact(IntPoly{1, 1, 1}, IntPoly{1, 1}),
                  std::invalid_argument);  // nonzero remainder
}

TEST_CASE("exact division inverts multiplication, both domains") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    IntPoly a = random_int_poly(rng, 5);
    IntPoly b = random_int_poly(rng, 4);
    if (!b.is_zero()) {
      auto c = b.coeffs();
      c.back() = 1;  // force monic
      b = IntPoly(std::move(c));
      REQUIRE(IntPoly::divrem_exact(a * b, b) == a);
    }
    std::uint64_t p = trial % 2 ? 5 : 1009;
    ModPoly am = random_mod_poly(rng, p, 5);
    ModPoly bm = random_mod_poly(rng, p, 4);
    if (!bm.is_zero()) {
      auto cm = bm.coeffs();
      cm.back() = 1;
      bm = ModPoly(p, std::move(cm));
      REQUIRE(ModPoly::divrem_exact(am * bm, bm) == am);
    }
  }
}

TEST_CASE("derivative") {
  CHECK(IntPoly{3, 0, 1}.derivative() == IntPoly{0, 2});
  CHECK(IntPoly{7}.derivative().is_zero());
  CHECK(reduce_mod_p(IntPoly{12, 0, 6, 0, 1}, 5).derivative() ==
        ModPoly(5, {0, 2, 0, 4}));
}

TEST_CASE("eval") {
  ModPoly h(5, {4, 1, 1});  // x^2 + x + 4
  CHECK(h.eval(2) == 0);    // the double root
  CHECK(h.eval(0) == h.coeff(0));
  CHECK(ModPoly(5, {1, 0, 1}).eval(3) == 0);  // 9 + 1 = 10
  CHECK(IntPoly{1, 2, 3}.eval(2) == 17);
}

TEST_CASE("gcd_mod") {
  ModPoly a(7, {6, 0, 1});  // x^2 - 1
  ModPoly b(7, {6, 1});     // x - 1
  CHECK(gcd_mod(a, b) == b);
  ModPoly f(7, {3, 0, 2});
  CHECK(gcd_mod(f, ModPoly::zero(7)) == f.monic());
  CHECK(gcd_mod(ModPoly(5, {4, 1, 1}), ModPoly(5, {0, 4, 0, 0, 0, 1})) ==
        ModPoly(5, {3, 1}));  // x + 3 = x - 2
  CHECK_THROWS_AS(gcd_mod(ModPoly::zero(5), ModPoly::zero(5)),
                  std::invalid_argument);
}

TEST_CASE("frobenius_power") {
  // x^p mod (x - a) is the constant a, by Fermat.
  for (std::uint64_t p : {5ull, 13ull, 101ull}) {
    for (std::uint64_t a = 0; a < 5; ++a) {
      ModPoly h = ModPoly::linear_root(p, a);
      CHECK(frobenius_power(h, p) == ModPoly::constant(p, a % p));
    }
  }
  CHECK(frobenius_power(ModPoly(5, {1, 0, 1}), 2) == ModPoly(5, {4}));
  // x^5 mod (x^2 + x + 4) over F_5; its gap from x must pick out the
  // double root 2 via the gcd.
  ModPoly h(5, {4, 1, 1});
  ModPoly x5 = frobenius_power(h, 5);
  CHECK(x5 == ModPoly(5, {2}));
  CHECK(gcd_mod(x5 - ModPoly::x(5), h) == ModPoly(5, {3, 1}));
  // square-and-multiply against naive repeated multiplication
  ModPoly g(13, {3, 1, 0, 1});
  ModPoly acc = ModPoly::constant(13, 1);
  for (int i = 0; i < 29; ++i) {
    acc = ModPoly::divrem(acc * ModPoly::x(13), g).second;
  }
  CHECK(frobenius_power(g, 29) == acc);
}

TEST_CASE("has_root_mod_p") {
  CHECK(has_root_mod_p(ModPoly(5, {4, 1, 1})));        // double root 2
  CHECK_FALSE(has_root_mod_p(ModPoly(5, {1, 4, 1})));  // x^2 - x + 1
  CHECK(has_root_mod_p(ModPoly(7, {4, 1})));           // x - 3
  CHECK(has_root_mod_p(ModPoly(2, {0, 1, 1})));
  CHECK_FALSE(has_root_mod_p(ModPoly(2, {1, 1, 1})));
}

TEST_CASE("has_root agrees with exhaustive evaluation, all p <= 1000") {
  SplitMix64 rng(11);
  for (std::uint64_t p : primes_up_to(1000)) {
    for (int trial = 0; trial < 6; ++trial) {
      ModPoly h = random_mod_poly(rng, p, 8);
      if (h.is_zero()) continue;
      bool expect = !oracle::roots_exhaustive(h).empty();
      REQUIRE(has_root_mod_p(h) == expect);
    }
  }
}

TEST_CASE("roots_mod_p examples") {
  CHECK(roots_mod_p(ModPoly(5, {4, 1, 1})) == std::vector<std::uint64_t>{2});
  CHECK(roots_mod_p(ModPoly(7, {1, 6, 1})) ==
        std::vector<std::uint64_t>{3, 5});  // x^2 - x + 1 mod 7
  CHECK(roots_mod_p(ModPoly(3, {1, 0, 1})).empty());
}

TEST_CASE("roots_mod_p equals exhaustive evaluation for small p") {
  SplitMix64 rng(13);
  for (std::uint64_t p : {2ull, 3ull, 101ull, 997ull}) {
    for (int trial = 0; trial < 30; ++trial) {
      ModPoly h = random_mod_poly(rng, p, 6);
      if (h.is_zero()) continue;
      REQUIRE(roots_mod_p(h) == oracle::roots_exhaustive(h));
    }
  }
}

TEST_CASE("roots_mod_p splitting path matches the exhaustive path") {
  // Force the randomized splitter by dropping the threshold below p.
  SplitMix64 rng(17);
  RootsOptions split_opts;
  split_opts.exhaustive_threshold = 2;
  for (std::uint64_t p : {1009ull, 65537ull}) {
    for (int trial = 0; trial < 25; ++trial) {
      ModPoly h = random_mod_poly(rng, p, 6);
      if (h.is_zero()) continue;
      auto split = roots_mod_p(h, split_opts);
      REQUIRE(split == oracle::roots_exhaustive(h));
    }
  }
  // A polynomial with many roots exercises the recursive splitting.
  ModPoly many = ModPoly::constant(1009, 1);
  for (std::uint64_t a : {1ull, 5ull, 17ull, 100ull, 500ull, 1000ull, 0ull}) {
    many = many * ModPoly::linear_root(1009, a);
  }
  CHECK(roots_mod_p(many, split_opts) ==
        std::vector<std::uint64_t>{0, 1, 5, 17, 100, 500, 1000});
}

TEST_CASE("reduce_mod_p") {
  CHECK(reduce_mod_p(IntPoly{12, 6, 1}, 5) == ModPoly(5, {2, 1, 1}));
  CHECK(reduce_mod_p(IntPoly{0, 1, 0, 5}, 5) == ModPoly(5, {0, 1}));
  CHECK(reduce_mod_p(IntPoly{-1, -7}, 5) == ModPoly(5, {4, 3}));
  CHECK(reduce_mod_p(IntPoly{12, -1, 6, 0, 1}, 5) ==
        ModPoly(5, {2, 4, 1, 0, 1}));
}

TEST_CASE("reduce_mod_p is a ring homomorphism") {
  SplitMix64 rng(23);
  for (std::uint64_t p : {2ull, 5ull, 1009ull}) {
    for (int trial = 0; trial < 40; ++trial) {
      IntPoly a = random_int_poly(rng, 4, 50);
      IntPoly b = random_int_poly(rng, 4, 50);
      REQUIRE(reduce_mod_p(a + b, p) == reduce_mod_p(a, p) + reduce_mod_p(b, p));
      REQUIRE(reduce_mod_p(a * b, p) == reduce_mod_p(a, p) * reduce_mod_p(b, p));
      REQUIRE(reduce_mod_p(IntPoly::compose(a, b), p) ==
              ModPoly::compose(reduce_mod_p(a, p), reduce_mod_p(b, p)));
    }
  }
}

TEST_CASE("text format round-trips") {
  CHECK(IntPoly{12, 0, 6, 0, 1}.to_string() == "12,0,6,0,1");
  CHECK(IntPoly::parse("12,0,6,0,1") == IntPoly{12, 0, 6, 0, 1});
  CHECK(IntPoly::parse("-3, 4 ,0") == IntPoly{-3, 4});
  CHECK(IntPoly::zero().to_string() == "0");
  CHECK_THROWS_AS(IntPoly::parse(""), std::invalid_argument);
  SplitMix64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    IntPoly a = random_int_poly(rng, 6, 1000);
    REQUIRE(IntPoly::parse(a.to_string()) == a);
  }
}
