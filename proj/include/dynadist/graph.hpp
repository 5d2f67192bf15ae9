#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynadist/int_poly.hpp"

namespace dynadist {

/// Default cap on graph size (one 32-bit word per vertex).
inline constexpr std::uint64_t kDefaultGraphThreshold = 1u << 24;

/// Functional graph of a self-map of F_p: image[a] = f(a). Every vertex
/// has out-degree exactly one.
struct FunctionalGraph {
  std::uint64_t p = 0;
  std::vector<std::uint32_t> image;
};

struct GraphOptions {
  std::uint64_t threshold = kDefaultGraphThreshold;
  unsigned threads = 1;
};

/// Builds the graph of x -> f(x) mod p by direct evaluation. Throws if
/// p exceeds the threshold.
FunctionalGraph build_graph(const IntPoly& f, std::uint64_t p,
                            const GraphOptions& opts = {});

/// Multiset of cycle lengths: (length, number of cycles of that
/// length), lengths strictly increasing.
struct CycleSpectrum {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;

  bool has_length(std::uint64_t n) const;
  friend bool operator==(const CycleSpectrum&, const CycleSpectrum&) = default;
  std::string to_string() const;  // "len:count len:count ..."
};

/// Per-vertex cycle membership: cycle_length[v] is the length of the
/// cycle v lies on, or 0 for tree vertices.
struct CycleStructure {
  CycleSpectrum spectrum;
  std::vector<std::uint32_t> cycle_length;
};

CycleStructure analyze_cycles(const FunctionalGraph& g);
CycleSpectrum cycle_spectrum(const FunctionalGraph& g);

/// Vertices lying on cycles of length exactly n, ascending.
std::vector<std::uint32_t> points_of_period(const FunctionalGraph& g,
                                            std::uint64_t n);

/// Canonical byte string: equal codes iff the graphs are isomorphic as
/// directed graphs (within one encoding version). Trees hanging off
/// cycles get AHU paren-strings with children sorted lexicographically,
/// each cycle takes the least rotation of its vertex code sequence, and
/// component codes are sorted and concatenated.
using CanonicalCode = std::string;
CanonicalCode canonical_code(const FunctionalGraph& g);

std::string code_to_hex(const CanonicalCode& code);

bool isomorphic(const FunctionalGraph& a, const FunctionalGraph& b);

/// True iff the mod-p graphs of the given maps are pairwise
/// non-isomorphic. Requires at least two maps.
bool distinguishable(const std::vector<IntPoly>& maps, std::uint64_t p,
                     const GraphOptions& opts = {});

/// Index of the lexicographically least rotation of a token sequence.
std::size_t least_rotation(const std::vector<std::string>& tokens);

}  // namespace dynadist
