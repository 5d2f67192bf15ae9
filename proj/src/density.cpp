#include "dynadist/density.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dynadist/dynatomic.hpp"
#include "dynadist/wreath.hpp"

namespace dynadist {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 15];
    v >>= 4;
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t p, std::uint64_t mi,
                       std::uint64_t ni) {
  SplitMix64 rng(seed ^ (p * 0x9e3779b97f4a7c15ull) ^ (mi << 32) ^ ni);
  return rng.next();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (x < 2) throw std::invalid_argument("config: x must be at least 2");
  if (k < 2) throw std::invalid_argument("config: k must be at least 2");
  if (ms.empty()) throw std::invalid_argument("config: no m values");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      if (ms[i] == ms[j]) {
        throw std::invalid_argument("config: m values must be distinct");
      }
    }
  }
  for (unsigned n : ns) {
    if (n == 0) throw std::invalid_argument("config: n values must be positive");
  }
}

std::string ExperimentConfig::canonical_json() const {
  ordered_json j;
  j["k"] = k;
  j["m"] = ms;
  j["n"] = ns;
  j["x"] = x;
  j["graph_threshold"] = graph_threshold;
  j["seed"] = seed;
  j["v"] = 1;
  return j.dump();
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a(canonical_json())); }

std::string RecordSet::event_key(std::size_t mi, std::size_t ni, bool root) const {
  std::ostringstream os;
  os << 'm' << config.ms[mi] << "_n" << config.ns[ni]
     << (root ? "_root" : "_per");
  return os.str();
}

std::string RecordSet::pair_key(std::size_t i, std::size_t j) const {
  std::ostringstream os;
  os << 'm' << config.ms[i] << "_m" << config.ms[j];
  return os.str();
}

std::pair<std::size_t, bool> RecordSet::resolve_event(const std::string& key) const {
  for (std::size_t mi = 0; mi < config.ms.size(); ++mi) {
    for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
      if (key == event_key(mi, ni, true)) return {mi * config.ns.size() + ni, true};
      if (key == event_key(mi, ni, false)) return {mi * config.ns.size() + ni, false};
    }
  }
  throw std::invalid_argument("unknown event key: " + key);
}

std::string header_line(const ExperimentConfig& config) {
  ordered_json j;
  j["config"] = ordered_json::parse(config.canonical_json());
  j["hash"] = config.hash();
  j["v"] = 1;
  return j.dump();
}

std::string record_line(const RecordSet& context, const DensityRecord& rec) {
  const auto& cfg = context.config;
  std::ostringstream os;
  os << "{\"p\":" << rec.p << ",\"events\":{";
  bool first = true;
  for (std::size_t mi = 0; mi < cfg.ms.size(); ++mi) {
    for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
      std::size_t idx = mi * cfg.ns.size() + ni;
      if (!first) os << ',';
      first = false;
      os << '"' << context.event_key(mi, ni, true)
         << "\":" << (rec.root_exists[idx] ? "true" : "false");
      os << ",\"" << context.event_key(mi, ni, false)
         << "\":" << (rec.period_exists[idx] ? "true" : "false");
    }
  }
  os << '}';
  if (!rec.dist.empty()) {
    os << ",\"dist\":{";
    std::size_t pi = 0;
    for (std::size_t i = 0; i < cfg.ms.size(); ++i) {
      for (std::size_t j = i + 1; j < cfg.ms.size(); ++j, ++pi) {
        if (pi) os << ',';
        os << '"' << context.pair_key(i, j)
           << "\":" << (rec.dist[pi] ? "true" : "false");
      }
    }
    os << '}';
  }
  os << ",\"v\":1}";
  return os.str();
}

namespace {

DensityRecord compute_record(const ExperimentConfig& cfg, std::uint64_t p) {
  DensityRecord rec;
  rec.p = p;
  const std::size_t en = cfg.ns.size();
  rec.root_exists.assign(cfg.ms.size() * en, 0);
  rec.period_exists.assign(cfg.ms.size() * en, 0);
  const bool graph_mode = p <= cfg.graph_threshold;

  std::vector<FunctionalGraph> graphs;
  std::vector<CycleStructure> cycles;
  if (graph_mode) {
    graphs.reserve(cfg.ms.size());
    cycles.reserve(cfg.ms.size());
    for (long long m : cfg.ms) {
      graphs.push_back(
          build_graph(IntPoly::power_map(cfg.k, BigInt(m)), p,
                      {cfg.graph_threshold, 1}));
      cycles.push_back(analyze_cycles(graphs.back()));
    }
  }

  for (std::size_t mi = 0; mi < cfg.ms.size(); ++mi) {
    for (std::size_t ni = 0; ni < en; ++ni) {
      DynatomicSpec spec{cfg.k, cfg.ms[mi], cfg.ns[ni]};
      const std::size_t idx = mi * en + ni;
      const ModPoly phi = dynatomic_mod(spec, p);
      bool root = phi.degree() >= 1 && has_root_mod_p(phi);
      rec.root_exists[idx] = root;
      if (graph_mode) {
        rec.period_exists[idx] = cycles[mi].spectrum.has_length(spec.n);
        continue;
      }
      bool per = false;
      if (root) {
        RootsOptions ropts;
        ropts.exhaustive_threshold = 1u << 12;
        ropts.seed = mix_seed(cfg.seed, p, mi, ni);
        const ModPoly f = reduce_mod_p(spec.map(), p);
        for (std::uint64_t alpha : roots_mod_p(phi, ropts)) {
          if (period_dividing(f, alpha, spec.n) == spec.n) {
            per = true;
            break;
          }
        }
      }
      rec.period_exists[idx] = per;
    }
  }

  if (graph_mode && cfg.ms.size() >= 2) {
    rec.dist.assign(cfg.ms.size() * (cfg.ms.size() - 1) / 2, 0);
    std::vector<CanonicalCode> codes(cfg.ms.size());
    std::size_t pi = 0;
    for (std::size_t i = 0; i < cfg.ms.size(); ++i) {
      for (std::size_t j = i + 1; j < cfg.ms.size(); ++j, ++pi) {
        if (cycles[i].spectrum != cycles[j].spectrum) {
          rec.dist[pi] = 1;
          continue;
        }
        if (codes[i].empty()) codes[i] = canonical_code(graphs[i]);
        if (codes[j].empty()) codes[j] = canonical_code(graphs[j]);
        rec.dist[pi] = codes[i] != codes[j];
      }
    }
  }
  return rec;
}

struct ResumeState {
  std::uint64_t last_prime = 0;   // 0: nothing usable on disk
  std::uintmax_t keep_bytes = 0;  // 0: even the header must be rewritten
  std::vector<DensityRecord> rows;
};

DensityRecord parse_record_line(const RecordSet& context, const std::string& line) {
  ordered_json j = ordered_json::parse(line);
  DensityRecord rec;
  rec.p = j.at("p").get<std::uint64_t>();
  const auto& cfg = context.config;
  const std::size_t en = cfg.ns.size();
  rec.root_exists.resize(cfg.ms.size() * en);
  rec.period_exists.resize(cfg.ms.size() * en);
  const auto& events = j.at("events");
  for (std::size_t mi = 0; mi < cfg.ms.size(); ++mi) {
    for (std::size_t ni = 0; ni < en; ++ni) {
      rec.root_exists[mi * en + ni] =
          events.at(context.event_key(mi, ni, true)).get<bool>();
      rec.period_exists[mi * en + ni] =
          events.at(context.event_key(mi, ni, false)).get<bool>();
    }
  }
  if (j.contains("dist")) {
    const auto& dist = j.at("dist");
    std::size_t pi = 0;
    rec.dist.resize(context.pair_count());
    for (std::size_t i = 0; i < cfg.ms.size(); ++i) {
      for (std::size_t j2 = i + 1; j2 < cfg.ms.size(); ++j2, ++pi) {
        rec.dist[pi] = dist.at(context.pair_key(i, j2)).get<bool>();
      }
    }
  }
  return rec;
}

// Scans an existing output file: validates the header against the
// config, keeps every complete record line, and notes where the intact
// prefix ends so a truncated tail can be dropped.
ResumeState scan_existing(const RecordSet& context, const std::string& path) {
  ResumeState state;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for resume: " + path);
  std::string header;
  if (!std::getline(in, header)) {
    return state;  // empty file: write the header afresh
  }
  const std::string expected = header_line(context.config);
  if (header == expected) {
    if (in.eof()) return state;  // newline got lost: rewrite from scratch
    state.keep_bytes = header.size() + 1;
  } else if (in.eof() && header.size() < expected.size() &&
             expected.compare(0, header.size(), header) == 0) {
    return state;  // torn header, provably this config: rewrite
  } else {
    try {
      ordered_json j = ordered_json::parse(header);
      if (j.at("hash").get<std::string>() != context.config.hash()) {
        throw ResumeMismatch("resume: config hash mismatch");
      }
      state.keep_bytes = header.size() + 1;
    } catch (const ordered_json::exception&) {
      throw ResumeMismatch("resume: unparsable header");
    }
  }
  std::string line;
  while (std::getline(in, line)) {
    bool complete = !in.eof();  // getline hit '\n', not end-of-file
    if (!complete) break;
    DensityRecord rec;
    try {
      rec = parse_record_line(context, line);
    } catch (const ordered_json::exception&) {
      break;  // malformed tail: drop it and everything after
    }
    state.rows.push_back(std::move(rec));
    state.last_prime = state.rows.back().p;
    state.keep_bytes += line.size() + 1;
  }
  return state;
}

}  // namespace

RecordSet sweep(const ExperimentConfig& config) {
  config.validate();
  RecordSet out;
  out.config = config;

  std::uint64_t start_after = 0;
  std::ofstream file;
  const bool to_file = !config.out_path.empty();
  if (to_file) {
    namespace fs = std::filesystem;
    if (config.resume && fs::exists(config.out_path)) {
      ResumeState state = scan_existing(out, config.out_path);
      std::error_code ec;
      fs::resize_file(config.out_path, state.keep_bytes, ec);
      if (ec) throw IoError("resume: cannot truncate " + config.out_path);
      out.rows = std::move(state.rows);
      start_after = state.last_prime;
      file.open(config.out_path, std::ios::binary | std::ios::app);
      if (!file) throw IoError("cannot append to " + config.out_path);
      if (state.keep_bytes == 0) file << header_line(config) << '\n';
    } else {
      file.open(config.out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot write " + config.out_path);
      file << header_line(config) << '\n';
    }
  }

  std::vector<std::uint64_t> primes = primes_up_to(config.x);
  std::size_t begin = 0;
  while (begin < primes.size() && primes[begin] <= start_after) ++begin;

  unsigned threads = config.threads
                         ? config.threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, 16);
  const std::size_t chunk_size = 256;

  for (std::size_t lo = begin; lo < primes.size(); lo += chunk_size) {
    const std::size_t hi = std::min(primes.size(), lo + chunk_size);
    std::vector<DensityRecord> chunk(hi - lo);
    auto worker = [&](unsigned t) {
      for (std::size_t i = lo + t; i < hi; i += threads) {
        chunk[i - lo] = compute_record(config, primes[i]);
      }
    };
    if (threads <= 1 || hi - lo == 1) {
      worker(0);
      if (threads > 1) {
        for (unsigned t = 1; t < threads; ++t) worker(t);
      }
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }
    for (auto& rec : chunk) {
      if (to_file) file << record_line(out, rec) << '\n';
      out.rows.push_back(std::move(rec));
    }
    if (to_file) {
      file.flush();
      if (!file) throw IoError("write failure on " + config.out_path);
    }
  }
  return out;
}

RecordSet load_records(const std::string& path, const ExperimentConfig* expect) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw IoError("empty record file " + path);
  RecordSet out;
  try {
    ordered_json j = ordered_json::parse(header);
    const auto& cfg = j.at("config");
    out.config.k = cfg.at("k").get<std::uint64_t>();
    out.config.ms = cfg.at("m").get<std::vector<long long>>();
    out.config.ns = cfg.at("n").get<std::vector<unsigned>>();
    out.config.x = cfg.at("x").get<std::uint64_t>();
    out.config.graph_threshold = cfg.at("graph_threshold").get<std::uint64_t>();
    out.config.seed = cfg.at("seed").get<std::uint64_t>();
    if (j.at("hash").get<std::string>() != out.config.hash()) {
      throw ResumeMismatch("header hash does not match its config");
    }
  } catch (const ordered_json::exception& e) {
    throw IoError(std::string("bad header in ") + path + ": " + e.what());
  }
  if (expect && expect->hash() != out.config.hash()) {
    throw ResumeMismatch("record file config differs from expected config");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.rows.push_back(parse_record_line(out, line));
    } catch (const ordered_json::exception& e) {
      throw IoError(std::string("bad record in ") + path + ": " + e.what());
    }
  }
  return out;
}

double empirical_density(const RecordSet& records, const std::string& key) {
  if (records.rows.empty()) {
    throw std::invalid_argument("empirical_density: no records");
  }
  auto [idx, root] = records.resolve_event(key);
  std::uint64_t count = 0;
  for (const auto& rec : records.rows) {
    count += root ? rec.root_exists[idx] : rec.period_exists[idx];
  }
  return static_cast<double>(count) / static_cast<double>(records.rows.size());
}

double independence_deviation(const RecordSet& records, const std::string& a,
                              const std::string& b) {
  if (records.rows.empty()) {
    throw std::invalid_argument("independence_deviation: no records");
  }
  auto [ia, ra] = records.resolve_event(a);
  auto [ib, rb] = records.resolve_event(b);
  std::uint64_t ca = 0, cb = 0, cab = 0;
  for (const auto& rec : records.rows) {
    bool va = ra ? rec.root_exists[ia] : rec.period_exists[ia];
    bool vb = rb ? rec.root_exists[ib] : rec.period_exists[ib];
    ca += va;
    cb += vb;
    cab += va && vb;
  }
  const double total = static_cast<double>(records.rows.size());
  return std::abs(cab / total - (ca / total) * (cb / total));
}

double predicted_density(std::uint64_t n, std::uint64_t k) {
  return p_k(n, k).to_double();
}

double distinguishability_density(const RecordSet& records,
                                  const std::vector<long long>& ms,
                                  bool cycle_only) {
  if (records.rows.empty()) {
    throw std::invalid_argument("distinguishability_density: no records");
  }
  std::vector<std::size_t> midx;
  for (long long m : ms) {
    auto it = std::find(records.config.ms.begin(), records.config.ms.end(), m);
    if (it == records.config.ms.end()) {
      throw std::invalid_argument("distinguishability_density: m not in config");
    }
    midx.push_back(static_cast<std::size_t>(it - records.config.ms.begin()));
  }
  for (std::size_t i = 0; i < midx.size(); ++i) {
    for (std::size_t j = i + 1; j < midx.size(); ++j) {
      if (midx[i] == midx[j]) {
        throw std::invalid_argument("distinguishability_density: duplicate m");
      }
    }
  }
  if (midx.size() < 2) return 1.0;  // vacuous pairwise condition

  const std::size_t en = records.config.ns.size();
  const std::size_t M = records.config.ms.size();
  auto pair_index = [M](std::size_t i, std::size_t j) {
    // index of (i, j), i < j, in row-major pair order
    return i * M - i * (i + 1) / 2 + (j - i - 1);
  };
  std::uint64_t count = 0;
  for (const auto& rec : records.rows) {
    bool all = true;
    for (std::size_t a = 0; a < midx.size() && all; ++a) {
      for (std::size_t b = a + 1; b < midx.size() && all; ++b) {
        std::size_t i = std::min(midx[a], midx[b]);
        std::size_t j = std::max(midx[a], midx[b]);
        if (cycle_only) {
          bool separated = false;
          for (std::size_t ni = 0; ni < en && !separated; ++ni) {
            separated = rec.period_exists[i * en + ni] !=
                        rec.period_exists[j * en + ni];
          }
          all = separated;
        } else {
          if (rec.dist.empty()) {
            throw std::invalid_argument(
                "distinguishability_density: record lacks dist columns");
          }
          all = rec.dist[pair_index(i, j)];
        }
      }
    }
    count += all;
  }
  return static_cast<double>(count) / static_cast<double>(records.rows.size());
}

DensityReport analyze(const RecordSet& records) {
  DensityReport report;
  report.config = records.config;
  report.prime_count = records.rows.size();
  const auto& cfg = records.config;
  const std::size_t en = cfg.ns.size();
  const double total = static_cast<double>(records.rows.size());

  for (std::size_t mi = 0; mi < cfg.ms.size(); ++mi) {
    for (std::size_t ni = 0; ni < en; ++ni) {
      const std::size_t idx = mi * en + ni;
      std::uint64_t roots = 0, pers = 0;
      std::vector<std::uint64_t> exceptional;
      for (const auto& rec : records.rows) {
        roots += rec.root_exists[idx];
        pers += rec.period_exists[idx];
        if (rec.root_exists[idx] != rec.period_exists[idx]) {
          exceptional.push_back(rec.p);
        }
      }
      DensityReport::EventRow root_row;
      root_row.key = records.event_key(mi, ni, true);
      root_row.count = roots;
      root_row.density = total > 0 ? roots / total : 0;
      double q = predicted_density(cfg.ns[ni], cfg.k);
      root_row.predicted = q;
      if (total > 0) {
        double tol = std::max(0.01, 4.0 * std::sqrt(q * (1.0 - q) / total));
        root_row.tolerance = tol;
        root_row.within_tolerance = std::abs(root_row.density - q) <= tol;
      }
      report.events.push_back(std::move(root_row));

      DensityReport::EventRow per_row;
      per_row.key = records.event_key(mi, ni, false);
      per_row.count = pers;
      per_row.density = total > 0 ? pers / total : 0;
      report.events.push_back(std::move(per_row));

      std::ostringstream ek;
      ek << 'm' << cfg.ms[mi] << "_n" << cfg.ns[ni];
      report.exceptional[ek.str()] = std::move(exceptional);
    }
  }

  if (!records.rows.empty()) {
    for (std::size_t a = 0; a < cfg.ms.size() * en; ++a) {
      for (std::size_t b = a + 1; b < cfg.ms.size() * en; ++b) {
        DensityReport::PairRow row;
        row.a = records.event_key(a / en, a % en, true);
        row.b = records.event_key(b / en, b % en, true);
        row.deviation = independence_deviation(records, row.a, row.b);
        report.independence.push_back(std::move(row));
      }
    }
  }

  if (cfg.ms.size() >= 2 && !records.rows.empty()) {
    const bool have_dist = std::all_of(
        records.rows.begin(), records.rows.end(),
        [](const DensityRecord& r) { return !r.dist.empty(); });
    std::size_t pi = 0;
    for (std::size_t i = 0; i < cfg.ms.size(); ++i) {
      for (std::size_t j = i + 1; j < cfg.ms.size(); ++j, ++pi) {
        DensityReport::DistRow row;
        row.key = records.pair_key(i, j);
        std::vector<long long> pair{cfg.ms[i], cfg.ms[j]};
        if (have_dist) {
          row.full = distinguishability_density(records, pair, false);
        }
        row.cycle_only = distinguishability_density(records, pair, true);
        report.dist.push_back(std::move(row));
      }
    }
    DensityReport::DistRow all_row;
    all_row.key = "all";
    if (have_dist) {
      all_row.full = distinguishability_density(records, cfg.ms, false);
    }
    all_row.cycle_only = distinguishability_density(records, cfg.ms, true);
    report.dist.push_back(std::move(all_row));
  }
  return report;
}

std::string DensityReport::to_json() const {
  ordered_json j;
  j["config"] = ordered_json::parse(config.canonical_json());
  j["primes"] = prime_count;
  ordered_json ev = ordered_json::object();
  for (const auto& row : events) {
    ordered_json r;
    r["count"] = row.count;
    r["density"] = row.density;
    if (row.predicted) r["predicted"] = *row.predicted;
    if (row.tolerance) r["tolerance"] = *row.tolerance;
    if (row.within_tolerance) r["within_tolerance"] = *row.within_tolerance;
    ev[row.key] = std::move(r);
  }
  j["events"] = std::move(ev);
  ordered_json ind = ordered_json::array();
  for (const auto& row : independence) {
    ind.push_back({{"a", row.a}, {"b", row.b}, {"deviation", row.deviation}});
  }
  j["independence"] = std::move(ind);
  ordered_json exc = ordered_json::object();
  for (const auto& [key, primes] : exceptional) exc[key] = primes;
  j["exceptional"] = std::move(exc);
  ordered_json d = ordered_json::array();
  for (const auto& row : dist) {
    ordered_json r;
    r["pair"] = row.key;
    if (row.full) r["full"] = *row.full;
    r["cycle_only"] = row.cycle_only;
    d.push_back(std::move(r));
  }
  j["distinguishability"] = std::move(d);
  return j.dump(2);
}

std::string DensityReport::to_csv() const {
  std::ostringstream os;
  os << "kind,key,count,total,value,predicted,tolerance\n";
  for (const auto& row : events) {
    os << "event," << row.key << ',' << row.count << ',' << prime_count << ','
       << row.density << ',';
    if (row.predicted) os << *row.predicted;
    os << ',';
    if (row.tolerance) os << *row.tolerance;
    os << '\n';
  }
  for (const auto& row : independence) {
    os << "independence," << row.a << '|' << row.b << ",,," << row.deviation
       << ",,\n";
  }
  for (const auto& [key, primes] : exceptional) {
    os << "exceptional," << key << ',' << primes.size() << ',' << prime_count
       << ",,,\n";
  }
  for (const auto& row : dist) {
    os << "distinguishability_full," << row.key << ",," << prime_count << ',';
    if (row.full) os << *row.full;
    os << ",,\n";
    os << "distinguishability_cycle_only," << row.key << ",," << prime_count << ','
       << row.cycle_only << ",,\n";
  }
  return os.str();
}

}  // namespace dynadist
