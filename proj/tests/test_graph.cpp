#include <doctest.h>

#include <algorithm>

#include "dynadist/graph.hpp"
#include "dynadist/mod_poly.hpp"
#include "oracles.hpp"

using namespace dynadist;

namespace {

FunctionalGraph identity_graph(std::uint64_t p) {
  FunctionalGraph g;
  g.p = p;
  g.image.resize(p);
  for (std::uint64_t v = 0; v < p; ++v) g.image[v] = v;
  return g;
}

FunctionalGraph relabel(const FunctionalGraph& g,
                        const std::vector<std::uint32_t>& perm) {
  FunctionalGraph out;
  out.p = g.p;
  out.image.resize(g.image.size());
  for (std::size_t v = 0; v < g.image.size(); ++v) {
    out.image[perm[v]] = perm[g.image[v]];
  }
  return out;
}

std::vector<std::uint32_t> random_permutation(SplitMix64& rng, std::size_t n) {
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i-- > 1;) {
    std::swap(perm[i], perm[rng.below(i + 1)]);
  }
  return perm;
}

FunctionalGraph random_graph(SplitMix64& rng, std::uint64_t p) {
  FunctionalGraph g;
  g.p = p;
  g.image.resize(p);
  for (std::uint64_t v = 0; v < p; ++v) {
    g.image[v] = static_cast<std::uint32_t>(rng.below(p));
  }
  return g;
}

}  // namespace

TEST_CASE("build_graph") {
  auto g = build_graph(IntPoly::power_map(2, 1), 5);
  CHECK(g.image == std::vector<std::uint32_t>{1, 2, 0, 0, 2});
  auto h = build_graph(IntPoly::power_map(2, 2), 5);
  CHECK(h.image == std::vector<std::uint32_t>{2, 3, 1, 1, 3});
  auto id = build_graph(IntPoly::x(), 7);
  CHECK(id.image == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(build_graph(IntPoly::x(), 101, {100, 1}),
                  std::invalid_argument);
}

TEST_CASE("parallel build matches sequential build") {
  auto a = build_graph(IntPoly::power_map(2, 1), 65537, {1u << 24, 1});
  auto b = build_graph(IntPoly::power_map(2, 1), 65537, {1u << 24, 4});
  CHECK(a.image == b.image);
}

TEST_CASE("cycle_spectrum") {
  auto g1 = build_graph(IntPoly::power_map(2, 1), 5);
  CHECK(cycle_spectrum(g1).entries ==
        std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 1}});
  auto g2 = build_graph(IntPoly::power_map(2, 2), 5);
  CHECK(cycle_spectrum(g2).entries ==
        std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 1}});
  for (std::uint64_t p : {2ull, 7ull, 97ull}) {
    CHECK(cycle_spectrum(identity_graph(p)).entries ==
          std::vector<std::pair<std::uint64_t, std::uint64_t>>{{1, p}});
  }
  CHECK(cycle_spectrum(g1).to_string() == "3:1");
}

TEST_CASE("points_of_period") {
  auto g = build_graph(IntPoly::power_map(2, 1), 5);
  CHECK(points_of_period(g, 3) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(points_of_period(g, 1).empty());
  auto g3 = build_graph(IntPoly::power_map(2, 3), 5);
  CHECK(points_of_period(g3, 1) == std::vector<std::uint32_t>{2, 4});
}

TEST_CASE("points_of_period matches per-vertex brute iteration") {
  SplitMix64 rng(101);
  for (std::uint64_t p : {2ull, 3ull, 53ull, 199ull}) {
    for (int trial = 0; trial < 20; ++trial) {
      FunctionalGraph g = random_graph(rng, p);
      for (std::uint64_t n = 1; n <= 6; ++n) {
        REQUIRE(points_of_period(g, n) == oracle::period_points_brute(g, n));
      }
    }
  }
}

TEST_CASE("least_rotation") {
  CHECK(least_rotation({"b", "a", "c"}) == 1);
  CHECK(least_rotation({"a"}) == 0);
  CHECK(least_rotation({"b", "a", "b", "a"}) == 1);
  CHECK(least_rotation({"z", "y"}) == 1);
  // exhaustive comparison against the naive minimum over rotations
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(8);
    std::vector<std::string> tokens(n);
    for (auto& t : tokens) t = std::string(1, static_cast<char>('a' + rng.below(3)));
    std::size_t best = 0;
    auto rotation = [&](std::size_t s) {
      std::string cat;
      for (std::size_t i = 0; i < n; ++i) cat += tokens[(s + i) % n] + "|";
      return cat;
    };
    for (std::size_t s = 1; s < n; ++s) {
      if (rotation(s) < rotation(best)) best = s;
    }
    REQUIRE(rotation(least_rotation(tokens)) == rotation(best));
  }
}

TEST_CASE("canonical codes: identity and distinct spectra") {
  CHECK(canonical_code(identity_graph(3)) == canonical_code(identity_graph(3)));
  auto g1 = build_graph(IntPoly::power_map(2, 1), 5);
  auto g2 = build_graph(IntPoly::power_map(2, 2), 5);
  CHECK(canonical_code(g1) != canonical_code(g2));
  CHECK(isomorphic(g1, g1));
  CHECK_FALSE(isomorphic(g1, g2));
}

TEST_CASE("canonical code is invariant under relabeling") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    std::uint64_t p = trial % 2 ? 101 : 67;
    FunctionalGraph g = random_graph(rng, p);
    FunctionalGraph h = relabel(g, random_permutation(rng, p));
    REQUIRE(canonical_code(g) == canonical_code(h));
    REQUIRE(isomorphic(g, h));
  }
}

TEST_CASE("codes separate structurally different graphs with equal spectra") {
  // Both graphs: one fixed point; trees differ (a 2-chain vs a fork).
  FunctionalGraph chain;
  chain.p = 3;
  chain.image = {0, 0, 1};  // 2 -> 1 -> 0 -> 0
  FunctionalGraph fork;
  fork.p = 3;
  fork.image = {0, 0, 0};  // 1 -> 0, 2 -> 0
  CHECK(cycle_spectrum(chain).entries == cycle_spectrum(fork).entries);
  CHECK(canonical_code(chain) != canonical_code(fork));
}

TEST_CASE("isomorphic is an equivalence relation on a pool") {
  SplitMix64 rng(303);
  std::vector<FunctionalGraph> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(random_graph(rng, 23));
  pool.push_back(relabel(pool[0], random_permutation(rng, 23)));
  pool.push_back(relabel(pool[1], random_permutation(rng, 23)));
  for (std::size_t a = 0; a < pool.size(); ++a) {
    REQUIRE(isomorphic(pool[a], pool[a]));
    for (std::size_t b = 0; b < pool.size(); ++b) {
      REQUIRE(isomorphic(pool[a], pool[b]) == isomorphic(pool[b], pool[a]));
      for (std::size_t c = 0; c < pool.size(); ++c) {
        if (isomorphic(pool[a], pool[b]) && isomorphic(pool[b], pool[c])) {
          REQUIRE(isomorphic(pool[a], pool[c]));
        }
      }
    }
  }
}

TEST_CASE("distinguishable") {
  std::vector<IntPoly> pair{IntPoly::power_map(2, 1), IntPoly::power_map(2, 2)};
  CHECK(distinguishable(pair, 5));
  CHECK_FALSE(distinguishable({IntPoly::power_map(2, 1),
                               IntPoly::power_map(2, 1)},
                              7));
  // At p = 2 the two maps reduce to x^2+1 (a 2-cycle) and x^2 (two fixed
  // points); the spectra differ, so they are distinguishable.
  CHECK(distinguishable(pair, 2));
  CHECK_THROWS_AS(distinguishable({IntPoly::power_map(2, 1)}, 5),
                  std::invalid_argument);
  // Shifting by p leaves the reduced map unchanged.
  CHECK_FALSE(distinguishable({IntPoly::power_map(2, 1),
                               IntPoly::power_map(2, 8)},
                              7));
}

TEST_CASE("code_to_hex") {
  CHECK(code_to_hex("FG") == "4647");
  CHECK(code_to_hex("") == "");
}
