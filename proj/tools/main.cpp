// Command-line surface for the dynatomic / functional-graph / wreath /
// density toolkit. Subcommands:
//
//   dynatomic    print the nth dynatomic polynomial of x^k + m (over Z
//                or mod p), coefficients ascending, comma-separated
//   graph        cycle spectrum, canonical code (hex), period points,
//                or the raw image table of x^k + m mod p
//   wreath       fixed-point statistics: pn, pk, bound, pnbound, sseq
//   exceptional  primes where dynatomic root existence disagrees with
//                period-n cycle existence
//   sweep        prime-density experiment, records streamed to JSONL
//   report       aggregate a JSONL record file
//   selftest     quick invariant checks
//
// Exit codes: 0 success, 1 usage, 2 precondition violation, 3 I/O.

#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dynadist/density.hpp"
#include "dynadist/dynatomic.hpp"
#include "dynadist/graph.hpp"
#include "dynadist/wreath.hpp"

namespace {

using dynadist::BigInt;
using dynadist::Rational;
using ordered_json = nlohmann::ordered_json;

struct DynatomicArgs {
  std::uint64_t k = 2;
  long long m = 0;
  unsigned n = 1;
  std::uint64_t mod = 0;  // 0: over Z
  bool json = false;
};

int run_dynatomic(const DynatomicArgs& a) {
  dynadist::DynatomicSpec spec{a.k, a.m, a.n};
  std::string coeffs;
  if (a.mod) {
    coeffs = dynadist::dynatomic_mod(spec, a.mod).to_string();
  } else {
    coeffs = dynadist::dynatomic_int(spec.map(), a.n).to_string();
  }
  if (a.json) {
    ordered_json j;
    j["k"] = a.k;
    j["m"] = a.m;
    j["n"] = a.n;
    if (a.mod) j["mod"] = a.mod;
    j["coeffs"] = coeffs;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << coeffs << "\n";
  }
  return 0;
}

struct GraphArgs {
  std::uint64_t k = 2;
  long long m = 0;
  std::uint64_t p = 2;
  std::uint64_t threshold = dynadist::kDefaultGraphThreshold;
  bool spectrum = false;
  bool code = false;
  bool image = false;
  unsigned period_points = 0;
  bool json = false;
};

int run_graph(const GraphArgs& a) {
  auto g = dynadist::build_graph(dynadist::IntPoly::power_map(a.k, BigInt(a.m)),
                                 a.p, {a.threshold, 1});
  ordered_json j;
  j["k"] = a.k;
  j["m"] = a.m;
  j["p"] = a.p;
  bool any = false;
  if (a.spectrum) {
    auto spec = dynadist::cycle_spectrum(g);
    if (a.json) {
      ordered_json rows = ordered_json::array();
      for (auto& [len, count] : spec.entries) rows.push_back({len, count});
      j["spectrum"] = std::move(rows);
    } else {
      std::cout << spec.to_string() << "\n";
    }
    any = true;
  }
  if (a.code) {
    std::string hex = dynadist::code_to_hex(dynadist::canonical_code(g));
    if (a.json) {
      j["code"] = hex;
    } else {
      std::cout << hex << "\n";
    }
    any = true;
  }
  if (a.period_points) {
    auto pts = dynadist::points_of_period(g, a.period_points);
    if (a.json) {
      j["period_points"] = pts;
    } else {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::cout << (i ? " " : "") << pts[i];
      }
      std::cout << "\n";
    }
    any = true;
  }
  if (a.image || !any) {
    if (a.json) {
      j["image"] = g.image;
    } else {
      for (std::size_t i = 0; i < g.image.size(); ++i) {
        std::cout << (i ? " " : "") << g.image[i];
      }
      std::cout << "\n";
    }
  }
  if (a.json) std::cout << j.dump() << "\n";
  return 0;
}

std::string prob_str(const dynadist::ProbValue& v) {
  if (v.is_exact()) {
    std::ostringstream os;
    os << v.rational();
    return os.str();
  }
  std::ostringstream os;
  os.precision(15);
  os << v.to_double();
  return os.str();
}

int run_selftest() {
  bool ok = true;
  auto check = [&](const char* name, bool pass) {
    std::cout << (pass ? "PASS  " : "FAIL  ") << name << "\n";
    ok = ok && pass;
  };
  {
    bool pass = true;
    for (std::uint64_t n = 2; n <= 2000 && pass; ++n) {
      long long s = 0;
      for (auto d : dynadist::divisors(n)) s += dynadist::moebius(d);
      pass = s == 0;
    }
    check("moebius divisor sums vanish", pass);
  }
  {
    bool pass = true;
    for (std::uint64_t r = 1; r <= 5 && pass; ++r) {
      for (std::uint64_t n = 1; n <= 4 && pass; ++n) {
        pass = dynadist::p_rn_exact({n, r}) == dynadist::p_rn_brute({n, r});
      }
    }
    check("wreath closed form matches enumeration", pass);
  }
  {
    bool pass = true;
    for (std::uint64_t k = 2; k <= 3 && pass; ++k) {
      for (long long m = -1; m <= 2 && pass; ++m) {
        auto f = dynadist::IntPoly::power_map(k, BigInt(m));
        dynadist::IntPoly prod = dynadist::IntPoly::constant(1);
        for (auto d : dynadist::divisors(4)) {
          prod = prod * dynadist::dynatomic_int(f, static_cast<unsigned>(d));
        }
        pass = prod == dynadist::IntPoly::iterate(f, 4) - dynadist::IntPoly::x();
      }
    }
    check("dynatomic product identity (n = 4)", pass);
  }
  {
    dynadist::SplitMix64 rng(12345);
    bool pass = true;
    for (int trial = 0; trial < 20 && pass; ++trial) {
      std::uint64_t p = 97;
      auto g = dynadist::build_graph(
          dynadist::IntPoly::power_map(2, BigInt(trial)), p);
      std::vector<std::uint32_t> perm(p);
      for (std::uint64_t i = 0; i < p; ++i) perm[i] = i;
      for (std::uint64_t i = p; i-- > 1;) {
        std::swap(perm[i], perm[rng.below(i + 1)]);
      }
      dynadist::FunctionalGraph relabeled;
      relabeled.p = p;
      relabeled.image.resize(p);
      for (std::uint64_t v = 0; v < p; ++v) {
        relabeled.image[perm[v]] = perm[g.image[v]];
      }
      pass = dynadist::canonical_code(g) == dynadist::canonical_code(relabeled);
    }
    check("canonical code is relabeling invariant", pass);
  }
  {
    auto exc = dynadist::exceptional_primes({2, 3, 2}, 200);
    bool pass = std::find(exc.begin(), exc.end(), 5) != exc.end();
    check("exceptional prime 5 for x^2+3, n=2", pass);
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynatomic polynomials, functional graphs mod p, wreath "
               "fixed-point statistics, and prime-density experiments"};
  app.require_subcommand(1);

  DynatomicArgs da;
  auto* dyn = app.add_subcommand("dynatomic",
                                 "nth dynatomic polynomial of x^k + m");
  dyn->add_option("--k", da.k, "map degree (>= 2)")->required();
  dyn->add_option("--m", da.m, "constant term")->required();
  dyn->add_option("--n", da.n, "period")->required();
  dyn->add_option("--mod", da.mod, "reduce mod this prime");
  dyn->add_flag("--json", da.json, "JSON output");

  GraphArgs ga;
  auto* gr = app.add_subcommand("graph", "functional graph of x^k + m mod p");
  gr->add_option("--k", ga.k, "map degree")->required();
  gr->add_option("--m", ga.m, "constant term")->required();
  gr->add_option("--p", ga.p, "prime modulus")->required();
  gr->add_option("--graph-threshold", ga.threshold, "largest allowed p");
  gr->add_flag("--spectrum", ga.spectrum, "print cycle spectrum");
  gr->add_flag("--code", ga.code, "print canonical code as hex");
  gr->add_flag("--image", ga.image, "print the image table");
  gr->add_option("--period-points", ga.period_points,
                 "print vertices on cycles of exactly this length");
  gr->add_flag("--json", ga.json, "JSON output");

  auto* wr = app.add_subcommand("wreath", "wreath fixed-point statistics");
  wr->require_subcommand(1);
  std::uint64_t wr_r = 1, wr_n = 1, wr_k = 2;
  std::uint64_t ss_start = 1, ss_step = 1;
  std::size_t ss_len = 10;
  bool wr_brute = false, wr_float = false, wr_json = false, ss_brute = false;
  auto* pn = wr->add_subcommand("pn", "P_{r,n}");
  pn->add_option("--r", wr_r)->required();
  pn->add_option("--n", wr_n)->required();
  pn->add_flag("--brute", wr_brute, "by full enumeration");
  pn->add_flag("--float", wr_float, "floating-point evaluation");
  pn->add_flag("--exact", "exact evaluation (default)");
  auto* pk = wr->add_subcommand("pk", "P_k(n) = P_{r_k(n),n}");
  pk->add_option("--n", wr_n)->required();
  pk->add_option("--k", wr_k)->required();
  auto* bound = wr->add_subcommand("bound",
                                   "|P_{r,n} - (1-e^{-1/n})| vs (1+2^r)/r!");
  bound->add_option("--r", wr_r)->required();
  bound->add_option("--n", wr_n)->required();
  bound->add_flag("--json", wr_json);
  auto* pnb = wr->add_subcommand("pnbound",
                                 "|P_k(n)(1-P_k(n)) - 1/n| vs 121/n^2");
  pnb->add_option("--n", wr_n)->required();
  pnb->add_option("--k", wr_k)->required();
  auto* sseq = wr->add_subcommand("sseq", "s-sequence of a progression");
  sseq->add_option("--start", ss_start)->required();
  sseq->add_option("--step", ss_step)->required();
  sseq->add_option("--k", wr_k)->required();
  sseq->add_option("--length", ss_len)->required();
  sseq->add_flag("--brute", ss_brute, "also enumerate tiny product groups");
  std::uint64_t tbl_nmax = 15;
  auto* tbl = wr->add_subcommand(
      "table", "rows of n, r_k(n), P_k(n), and the bound slack");
  tbl->add_option("--k", wr_k)->required();
  tbl->add_option("--n-max", tbl_nmax);
  tbl->add_flag("--json", wr_json);

  dynadist::DynatomicSpec ex_spec;
  std::uint64_t ex_x = 10000;
  dynadist::ExceptionalScanOptions ex_opts;
  auto* ex = app.add_subcommand("exceptional",
                                "primes where root existence and period-n "
                                "existence disagree");
  ex->add_option("--k", ex_spec.k)->required();
  ex->add_option("--m", ex_spec.m)->required();
  ex->add_option("--n", ex_spec.n)->required();
  ex->add_option("--x", ex_x, "scan primes up to this bound")->required();
  ex->add_option("--graph-threshold", ex_opts.graph_threshold);
  ex->add_option("--threads", ex_opts.threads);

  dynadist::ExperimentConfig sweep_cfg;
  auto* sw = app.add_subcommand("sweep", "prime-density experiment");
  sw->add_option("--k", sweep_cfg.k)->required();
  sw->add_option("--m", sweep_cfg.ms, "m values")->required()->delimiter(',');
  sw->add_option("--n", sweep_cfg.ns, "periods")->required()->delimiter(',');
  sw->add_option("--x", sweep_cfg.x, "prime bound")->required();
  sw->add_option("--out", sweep_cfg.out_path, "JSONL output path");
  sw->add_option("--graph-threshold", sweep_cfg.graph_threshold);
  sw->add_option("--seed", sweep_cfg.seed);
  sw->add_option("--threads", sweep_cfg.threads);
  sw->add_flag("--resume", sweep_cfg.resume, "continue an interrupted run");
  bool sweep_report = false;
  sw->add_flag("--report", sweep_report, "print the aggregated report");

  std::string rep_in, rep_csv;
  bool rep_json = false;
  auto* rep = app.add_subcommand("report", "aggregate a JSONL record file");
  rep->add_option("--in", rep_in, "JSONL record file")->required();
  rep->add_option("--csv", rep_csv, "also write a CSV table here");
  rep->add_flag("--json", rep_json, "JSON output (default)");

  app.add_subcommand("selftest", "quick invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (dyn->parsed()) return run_dynatomic(da);
    if (gr->parsed()) return run_graph(ga);
    if (pn->parsed()) {
      if (wr_float) {
        std::cout << dynadist::p_rn_float(wr_r, wr_n) << "\n";
      } else if (wr_brute) {
        std::cout << dynadist::p_rn_brute({wr_n, wr_r}) << "\n";
      } else {
        std::cout << dynadist::p_rn_exact({wr_n, wr_r}) << "\n";
      }
      return 0;
    }
    if (pk->parsed()) {
      std::cout << prob_str(dynadist::p_k(wr_n, wr_k)) << "\n";
      return 0;
    }
    if (bound->parsed()) {
      auto b = dynadist::check_limit_bound({wr_n, wr_r});
      if (wr_json) {
        ordered_json j{{"lhs", b.lhs}, {"rhs", b.rhs}, {"ok", b.ok}};
        std::cout << j.dump() << "\n";
      } else {
        std::cout << b.lhs << " < " << b.rhs << " : " << (b.ok ? "ok" : "VIOLATED")
                  << "\n";
      }
      return b.ok ? 0 : 2;
    }
    if (pnb->parsed()) {
      bool ok = dynadist::check_variance_bound(wr_n, wr_k);
      std::cout << (ok ? "ok" : "VIOLATED") << "\n";
      return ok ? 0 : 2;
    }
    if (sseq->parsed()) {
      dynadist::ProgressionSpec spec{ss_start, ss_step, wr_k, ss_len};
      auto seq = dynadist::s_sequence(spec);
      for (std::size_t i = 0; i < seq.size(); ++i) {
        std::cout << i << " " << prob_str(seq[i]) << "\n";
      }
      if (ss_brute) {
        std::cout << "brute " << dynadist::s_brute(spec) << "\n";
      }
      return 0;
    }
    if (tbl->parsed()) {
      ordered_json rows = ordered_json::array();
      if (!wr_json) std::cout << "n,r_k,p_k,slack\n";
      for (std::uint64_t n = 1; n <= tbl_nmax; ++n) {
        BigInt r = dynadist::r_k(n, wr_k);
        auto p = dynadist::p_k(n, wr_k);
        double target = 1.0 - std::exp(-1.0 / static_cast<double>(n));
        double slack = std::abs(p.to_double() - target);
        if (wr_json) {
          ordered_json row;
          row["n"] = n;
          row["r_k"] = r.str();
          row["p_k"] = prob_str(p);
          row["slack"] = slack;
          rows.push_back(std::move(row));
        } else {
          std::cout << n << ',' << r << ',' << prob_str(p) << ',' << slack
                    << "\n";
        }
      }
      if (wr_json) std::cout << rows.dump() << "\n";
      return 0;
    }
    if (ex->parsed()) {
      auto primes = dynadist::exceptional_primes(ex_spec, ex_x, ex_opts);
      for (std::size_t i = 0; i < primes.size(); ++i) {
        std::cout << (i ? " " : "") << primes[i];
      }
      std::cout << "\n";
      return 0;
    }
    if (sw->parsed()) {
      auto records = dynadist::sweep(sweep_cfg);
      if (sweep_report || sweep_cfg.out_path.empty()) {
        std::cout << dynadist::analyze(records).to_json() << "\n";
      } else {
        std::cerr << records.rows.size() << " records -> " << sweep_cfg.out_path
                  << "\n";
      }
      return 0;
    }
    if (rep->parsed()) {
      auto records = dynadist::load_records(rep_in);
      auto report = dynadist::analyze(records);
      if (!rep_csv.empty()) {
        std::ofstream out(rep_csv, std::ios::binary);
        if (!out) throw dynadist::IoError("cannot write " + rep_csv);
        out << report.to_csv();
      }
      if (rep_json || rep_csv.empty()) std::cout << report.to_json() << "\n";
      return 0;
    }
    return run_selftest();
  } catch (const dynadist::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const dynadist::ResumeMismatch& e) {
    std::cerr << "resume error: " << e.what() << "\n";
    return 2;
  } catch (const dynadist::SquarefreeViolation& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
