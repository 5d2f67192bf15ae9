#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynadist/graph.hpp"

namespace dynadist {

/// One prime-sweep experiment: the maps x^k + m for every m in ms, the
/// periods in ns, all primes p <= x. Primes at or below graph_threshold
/// additionally get full functional-graph distinguishability columns.
struct ExperimentConfig {
  std::uint64_t k = 2;
  std::vector<long long> ms;
  std::vector<unsigned> ns;
  std::uint64_t x = 100;
  std::uint64_t graph_threshold = kDefaultGraphThreshold;
  std::uint64_t seed = 0;
  std::string out_path;  // empty keeps records in memory only
  bool resume = false;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
  /// Canonical JSON of the fields that determine record content
  /// (out_path, resume and threads do not).
  std::string canonical_json() const;
  /// FNV-1a hash of canonical_json, as 16 hex digits.
  std::string hash() const;
};

/// Measurements for one prime. Event vectors are indexed by
/// m_index * ns.size() + n_index; dist by the pair index of (i, j),
/// i < j, in config order. dist is empty when p exceeded the graph
/// threshold.
struct DensityRecord {
  std::uint64_t p = 0;
  std::vector<std::uint8_t> root_exists;
  std::vector<std::uint8_t> period_exists;
  std::vector<std::uint8_t> dist;
};

/// Parsed sweep output: config plus one record per prime, ascending.
struct RecordSet {
  ExperimentConfig config;
  std::vector<DensityRecord> rows;

  std::size_t event_count() const { return config.ms.size() * config.ns.size(); }
  std::size_t pair_count() const {
    return config.ms.size() * (config.ms.size() - 1) / 2;
  }
  std::string event_key(std::size_t mi, std::size_t ni, bool root) const;
  std::string pair_key(std::size_t i, std::size_t j) const;
  /// Resolves "m<m>_n<n>_root" / "m<m>_n<n>_per"; throws on unknown keys.
  std::pair<std::size_t, bool> resolve_event(const std::string& key) const;
};

/// Aggregated view of a record set.
struct DensityReport {
  struct EventRow {
    std::string key;
    std::uint64_t count = 0;
    double density = 0;
    std::optional<double> predicted;  // root events only
    std::optional<double> tolerance;  // max(0.01, 4*sqrt(q(1-q)/total))
    /// Set for root events: whether |density - predicted| <= tolerance.
    /// A false value is a finding to look at, not an error.
    std::optional<bool> within_tolerance;
  };
  struct PairRow {
    std::string a, b;
    double deviation = 0;  // |d(A and B) - d(A) d(B)|
  };
  struct DistRow {
    std::string key;  // pair key, or "all"
    std::optional<double> full;  // canonical-code mode; absent without dist columns
    double cycle_only = 0;   // cycle-length-existence mode
  };

  ExperimentConfig config;
  std::uint64_t prime_count = 0;
  std::vector<EventRow> events;
  std::vector<PairRow> independence;
  std::map<std::string, std::vector<std::uint64_t>> exceptional;
  std::vector<DistRow> dist;

  std::string to_json() const;
  std::string to_csv() const;
};

class ResumeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs the sweep (continuing an interrupted run when config.resume is
/// set), streams records to config.out_path if given, and returns the
/// full record set. Output is byte-identical for a fixed config and
/// seed regardless of thread count or interruption points.
RecordSet sweep(const ExperimentConfig& config);

/// Reads a JSONL sweep file back. When expect is given, the header hash
/// must match its hash.
RecordSet load_records(const std::string& path,
                       const ExperimentConfig* expect = nullptr);

/// Serialized forms used for the JSONL stream.
std::string header_line(const ExperimentConfig& config);
std::string record_line(const RecordSet& context, const DensityRecord& rec);

DensityReport analyze(const RecordSet& records);

/// Fraction of records where the event holds. Key as in
/// RecordSet::resolve_event.
double empirical_density(const RecordSet& records, const std::string& key);

/// |d(A and B) - d(A) d(B)| over the record set.
double independence_deviation(const RecordSet& records, const std::string& a,
                              const std::string& b);

/// Wreath-model prediction for the density of dynatomic root existence.
double predicted_density(std::uint64_t n, std::uint64_t k);

/// Fraction of swept primes where the graphs of the selected maps are
/// pairwise non-isomorphic. Full mode needs dist columns on every
/// record; cycle-length-only mode needs only period events and counts a
/// pair distinguishable when some configured n separates the cycle
/// spectra by existence.
double distinguishability_density(const RecordSet& records,
                                  const std::vector<long long>& ms,
                                  bool cycle_only = false);

}  // namespace dynadist
