#include "dynadist/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dynadist/mod_poly.hpp"

namespace dynadist {

FunctionalGraph build_graph(const IntPoly& f, std::uint64_t p,
                            const GraphOptions& opts) {
  if (p > opts.threshold) {
    throw std::invalid_argument("build_graph: p exceeds graph threshold");
  }
  FunctionalGraph g;
  g.p = p;
  g.image.resize(p);
  const ModPoly fp = reduce_mod_p(f, p);
  auto fill = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t a = lo; a < hi; ++a) {
      g.image[a] = static_cast<std::uint32_t>(fp.eval(a));
    }
  };
  unsigned threads = opts.threads ? opts.threads : 1;
  if (threads <= 1 || p < (1u << 16)) {
    fill(0, p);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (p + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::uint64_t lo = t * chunk;
      std::uint64_t hi = std::min<std::uint64_t>(p, lo + chunk);
      if (lo < hi) pool.emplace_back(fill, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return g;
}

bool CycleSpectrum::has_length(std::uint64_t n) const {
  for (const auto& [len, count] : entries) {
    if (len == n) return count > 0;
  }
  return false;
}

std::string CycleSpectrum::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ' ';
    os << entries[i].first << ':' << entries[i].second;
  }
  return os.str();
}

CycleStructure analyze_cycles(const FunctionalGraph& g) {
  const std::size_t n = g.image.size();
  CycleStructure out;
  out.cycle_length.assign(n, 0);
  // 0 = untouched, 1 = on the current walk, 2 = settled.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::uint32_t> pos(n, 0);
  std::vector<std::uint32_t> path;
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (state[s] != 0) continue;
    path.clear();
    std::uint32_t v = s;
    while (state[v] == 0) {
      state[v] = 1;
      pos[v] = static_cast<std::uint32_t>(path.size());
      path.push_back(v);
      v = g.image[v];
    }
    if (state[v] == 1) {
      // Closed a new cycle within this walk.
      std::uint32_t start = pos[v];
      std::uint32_t len = static_cast<std::uint32_t>(path.size()) - start;
      ++counts[len];
      for (std::uint32_t i = start; i < path.size(); ++i) {
        out.cycle_length[path[i]] = len;
      }
    }
    for (std::uint32_t u : path) state[u] = 2;
  }
  out.spectrum.entries.assign(counts.begin(), counts.end());
  return out;
}

CycleSpectrum cycle_spectrum(const FunctionalGraph& g) {
  return analyze_cycles(g).spectrum;
}

std::vector<std::uint32_t> points_of_period(const FunctionalGraph& g,
                                            std::uint64_t n) {
  CycleStructure cs = analyze_cycles(g);
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < cs.cycle_length.size(); ++v) {
    if (cs.cycle_length[v] == n) out.push_back(v);
  }
  return out;
}

std::size_t least_rotation(const std::vector<std::string>& tokens) {
  // Booth's algorithm over an alphabet of whole tokens.
  const std::size_t n = tokens.size();
  if (n <= 1) return 0;
  std::vector<std::ptrdiff_t> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const std::string& sj = tokens[j % n];
    std::ptrdiff_t i = fail[j - k - 1];
    while (i != -1 && sj != tokens[(k + i + 1) % n]) {
      if (sj < tokens[(k + i + 1) % n]) k = j - i - 1;
      i = fail[i];
    }
    if (sj != tokens[(k + i + 1) % n]) {
      if (sj < tokens[(k + i + 1) % n]) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k;
}

namespace {

constexpr char kCodeVersion[] = "FG1:";

// AHU encoding of every tree hanging off the cycles: code(v) is
// "(" + concatenation of the children's codes in sorted order + ")".
// Processed leaves-first so each vertex is touched once.
std::vector<std::string> tree_codes(const FunctionalGraph& g,
                                    const CycleStructure& cs) {
  const std::size_t n = g.image.size();
  std::vector<std::uint32_t> pending(n, 0);  // unprocessed tree children
  for (std::uint32_t v = 0; v < n; ++v) {
    if (cs.cycle_length[v] == 0) ++pending[g.image[v]];
  }
  std::vector<std::vector<std::string>> child_codes(n);
  std::vector<std::string> code(n);
  std::vector<std::uint32_t> ready;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (cs.cycle_length[v] == 0 && pending[v] == 0) ready.push_back(v);
  }
  auto finish = [&](std::uint32_t v) {
    auto& parts = child_codes[v];
    std::sort(parts.begin(), parts.end());
    std::size_t total = 2;
    for (const auto& s : parts) total += s.size();
    std::string& c = code[v];
    c.reserve(total);
    c.push_back('(');
    for (const auto& s : parts) c += s;
    c.push_back(')');
    parts.clear();
    parts.shrink_to_fit();
  };
  while (!ready.empty()) {
    std::uint32_t v = ready.back();
    ready.pop_back();
    finish(v);
    std::uint32_t parent = g.image[v];
    child_codes[parent].push_back(std::move(code[v]));
    code[v].clear();
    code[v].shrink_to_fit();
    if (cs.cycle_length[parent] == 0 && --pending[parent] == 0) {
      ready.push_back(parent);
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (cs.cycle_length[v] != 0) finish(v);
  }
  return code;
}

}  // namespace

CanonicalCode canonical_code(const FunctionalGraph& g) {
  CycleStructure cs = analyze_cycles(g);
  std::vector<std::string> vertex_code = tree_codes(g, cs);
  const std::size_t n = g.image.size();
  std::vector<bool> used(n, false);
  std::vector<std::string> components;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (cs.cycle_length[s] == 0 || used[s]) continue;
    std::vector<std::string> cycle;
    std::uint32_t v = s;
    do {
      used[v] = true;
      cycle.push_back(std::move(vertex_code[v]));
      v = g.image[v];
    } while (v != s);
    std::size_t start = least_rotation(cycle);
    std::string comp;
    comp.push_back('[');
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      comp += cycle[(start + i) % cycle.size()];
    }
    comp.push_back(']');
    components.push_back(std::move(comp));
  }
  std::sort(components.begin(), components.end());
  CanonicalCode out = kCodeVersion;
  for (const auto& c : components) out += c;
  return out;
}

std::string code_to_hex(const CanonicalCode& code) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(code.size() * 2);
  for (unsigned char c : code) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

bool isomorphic(const FunctionalGraph& a, const FunctionalGraph& b) {
  if (a.image.size() != b.image.size()) return false;
  return canonical_code(a) == canonical_code(b);
}

bool distinguishable(const std::vector<IntPoly>& maps, std::uint64_t p,
                     const GraphOptions& opts) {
  if (maps.size() < 2) {
    throw std::invalid_argument("distinguishable: need at least two maps");
  }
  std::vector<FunctionalGraph> graphs;
  graphs.reserve(maps.size());
  for (const auto& f : maps) graphs.push_back(build_graph(f, p, opts));
  // Spectra differ => non-isomorphic; codes are only needed on ties.
  std::vector<CycleSpectrum> spectra;
  spectra.reserve(graphs.size());
  for (const auto& g : graphs) spectra.push_back(cycle_spectrum(g));
  std::vector<CanonicalCode> codes(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::size_t j = i + 1; j < graphs.size(); ++j) {
      if (spectra[i] != spectra[j]) continue;
      if (codes[i].empty()) codes[i] = canonical_code(graphs[i]);
      if (codes[j].empty()) codes[j] = canonical_code(graphs[j]);
      if (codes[i] == codes[j]) return false;
    }
  }
  return true;
}

}  // namespace dynadist
