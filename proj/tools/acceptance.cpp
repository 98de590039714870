// acceptance: one PASS/FAIL line per acceptance criterion.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dynpdr/bench.hpp"
#include "dynpdr/engine.hpp"
#include "dynpdr/families.hpp"
#include "dynpdr/oracle.hpp"

namespace fs = std::filesystem;
using namespace dynpdr;

namespace {

using Clock = std::chrono::steady_clock;

constexpr Strategy kStrategies[] = {Strategy::Standard, Strategy::Ctg, Strategy::Exctg, Strategy::Dynamic};

StrategyConfig config(Strategy s) {
  StrategyConfig cfg;
  cfg.kind = s;
  return cfg;
}

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fixed(double x, int prec = 1) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << x;
  return os.str();
}

bool any_failed = false;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  any_failed = any_failed || !ok;
  std::cout << "[" << (ok ? "PASS" : "FAIL") << "] " << n << " " << what << ": " << detail << std::endl;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// Criteria 1 and 2 share the corpus runs.
void corpus_checks(bool want1, bool want2, double limit) {
  const auto start = Clock::now();
  const auto corpus = families::default_corpus();
  std::size_t mismatches = 0, safe = 0, unsafe = 0, cert_fail = 0;
  std::string first_mismatch, first_cert;
  for (const auto& nc : corpus) {
    const auto truth = oracle::brute_force_reachable(nc.circuit);
    const TransitionSystem ts = to_transition_system(nc.circuit);
    for (Strategy s : kStrategies) {
      EngineOptions opts;
      opts.time_limit = std::chrono::duration<double>(limit);
      Verdict v = check(ts, config(s), opts);
      const bool want_safe = truth.verdict == oracle::OracleVerdict::Safe;
      const bool agree = want_safe ? v.result == VerdictKind::Safe : v.result == VerdictKind::Unsafe;
      if (!agree) {
        ++mismatches;
        if (first_mismatch.empty()) first_mismatch = nc.name + "/" + to_string(s) + " said " + to_string(v.result);
      }
      if (v.result == VerdictKind::Safe) {
        ++safe;
        if (!oracle::check_invariant(nc.circuit, v.invariant).ok()) {
          ++cert_fail;
          if (first_cert.empty()) first_cert = nc.name + "/" + to_string(s);
        }
      } else if (v.result == VerdictKind::Unsafe) {
        ++unsafe;
        if (!oracle::replay_trace(nc.circuit, v.trace).ok) {
          ++cert_fail;
          if (first_cert.empty()) first_cert = nc.name + "/" + to_string(s);
        }
      }
    }
  }
  const double secs = since(start);
  if (want1) {
    const bool ok = mismatches == 0 && corpus.size() >= 200 && secs < 600;
    report(1, ok, "oracle agreement",
           std::to_string(corpus.size()) + " circuits x 4 strategies, " + std::to_string(mismatches) +
               " mismatches, " + fixed(secs) + " s" + (first_mismatch.empty() ? "" : ", first: " + first_mismatch));
  }
  if (want2) {
    report(2, cert_fail == 0, "certification",
           std::to_string(safe) + " invariants and " + std::to_string(unsafe) + " traces checked, " +
               std::to_string(cert_fail) + " failures" + (first_cert.empty() ? "" : ", first: " + first_cert));
  }
}

void coincidence(const fs::path& dir) {
  const auto sub = families::sub_corpus(20);
  std::size_t differ = 0;
  std::string first;
  auto traced = [&](const TransitionSystem& ts, const StrategyConfig& cfg, const fs::path& q, const fs::path& l) {
    std::ofstream qs(q, std::ios::binary), ls(l, std::ios::binary);
    EngineOptions opts;
    opts.query_trace = &qs;
    opts.lemma_trace = &ls;
    check(ts, cfg, opts);
  };
  for (const auto& nc : sub) {
    const TransitionSystem ts = to_transition_system(nc.circuit);
    StrategyConfig ex0 = config(Strategy::Exctg);
    ex0.ctg_lv = 0;
    StrategyConfig ctg = config(Strategy::Ctg);
    ctg.ctg_max = 3;
    ctg.ctg_lv = 1;
    StrategyConfig ex1 = config(Strategy::Exctg);
    ex1.ctg_max = 3;
    ex1.ctg_lv = 1;
    ex1.exctg_limit = 1;
    const fs::path base = dir / nc.name;
    traced(ts, config(Strategy::Standard), base.string() + ".standard.queries", base.string() + ".standard.lemmas");
    traced(ts, ex0, base.string() + ".exctg_lv0.queries", base.string() + ".exctg_lv0.lemmas");
    traced(ts, ctg, base.string() + ".ctg.queries", base.string() + ".ctg.lemmas");
    traced(ts, ex1, base.string() + ".exctg_limit1.queries", base.string() + ".exctg_limit1.lemmas");
    const bool q_same = slurp(base.string() + ".standard.queries") == slurp(base.string() + ".exctg_lv0.queries");
    const bool l_same = slurp(base.string() + ".ctg.lemmas") == slurp(base.string() + ".exctg_limit1.lemmas");
    if (!q_same || !l_same) {
      ++differ;
      if (first.empty()) first = nc.name;
    }
  }
  report(3, differ == 0 && sub.size() == 20, "coincidence",
         std::to_string(sub.size()) + " circuits, " + std::to_string(differ) + " with differing trace files" +
             (first.empty() ? "" : ", first: " + first) + " (files in " + dir.string() + ")");
}

void branch_table() {
  StrategyConfig cfg;
  struct Row {
    Activity sact;
    DynBranch branch;
    unsigned ctg_max;
    unsigned limit;
  };
  const Row rows[] = {{0, DynBranch::Standard, 0, 1},  {9, DynBranch::Standard, 0, 1}, {10, DynBranch::Ctg, 2, 1},
                      {25, DynBranch::Ctg, 3, 1},      {39, DynBranch::Ctg, 4, 1},     {40, DynBranch::Exctg, 5, 5},
                      {72, DynBranch::Exctg, 5, 11}};
  std::size_t bad = 0;
  for (const Row& r : rows) {
    DynChoice c = strategy_params(r.sact, cfg);
    bool ok = c.branch == r.branch && c.params.exctg_limit == r.limit;
    if (r.branch == DynBranch::Standard) ok = ok && c.params.ctg_lv == 0;
    if (r.branch != DynBranch::Standard) ok = ok && c.params.ctg_lv == 1 && c.params.ctg_max == r.ctg_max;
    bad += !ok;
  }
  report(4, bad == 0, "dynamic branch table", std::to_string(std::size(rows) - bad) + "/7 rows exact");
}

void frame_invariants() {
  const auto start = Clock::now();
  const auto sub = families::sub_corpus(20);
  std::size_t audits = 0, violations = 0;
  std::string first;
  for (const auto& nc : sub) {
    const TransitionSystem ts = to_transition_system(nc.circuit);
    for (Strategy s : kStrategies) {
      EngineOptions opts;
      opts.hooks.after_propagate = [&](const FrameSequence& f) {
        ++audits;
        for (const auto& msg : f.audit()) {
          ++violations;
          if (first.empty()) first = nc.name + ": " + msg;
        }
      };
      check(ts, config(s), opts);
    }
  }
  const double secs = since(start);
  report(5, violations == 0 && secs < 120, "frame invariants",
         std::to_string(audits) + " audits on " + std::to_string(sub.size()) + " circuits, " +
             std::to_string(violations) + " violations, " + fixed(secs) + " s" + (first.empty() ? "" : ", first: " + first));
}

void scalability(const fs::path& dir, double limit, unsigned jobs) {
  const auto start = Clock::now();
  const fs::path hard_dir = dir / "hard", easy_dir = dir / "easy";
  fs::create_directories(hard_dir);
  fs::create_directories(easy_dir);
  std::vector<std::string> hard, easy;
  for (const auto& nc : families::hard_family()) {
    const fs::path p = hard_dir / (nc.name + ".aag");
    std::ofstream(p, std::ios::binary) << write_aag(nc.circuit);
    hard.push_back(p.string());
  }
  for (const auto& nc : families::sub_corpus(20)) {
    const fs::path p = easy_dir / (nc.name + ".aag");
    std::ofstream(p, std::ios::binary) << write_aag(nc.circuit);
    easy.push_back(p.string());
  }
  std::vector<bench::BenchJob> work;
  for (Strategy s : kStrategies) {
    for (const auto& p : hard) work.push_back({p, to_string(s), config(s)});
    for (const auto& p : easy) work.push_back({p, to_string(s), config(s)});
  }
  bench::RunLimits lim;
  lim.time_limit = limit;
  auto records = bench::run_all(work, lim, jobs);
  {
    std::ofstream os(dir / "results.csv", std::ios::binary);
    bench::write_csv(os, records);
  }

  std::set<std::string> hard_names;
  for (const auto& p : hard) hard_names.insert(fs::path(p).filename().string());
  std::vector<bench::RunRecord> hard_recs;
  for (const auto& r : records) {
    if (hard_names.count(r.case_name)) hard_recs.push_back(r);
  }
  auto hard_rep = bench::compare(hard_recs, "standard");
  auto mixed_rep = bench::compare(records, "standard");
  {
    std::ofstream(dir / "hard_table.txt") << hard_rep.table;
    std::ofstream(dir / "mixed_table.txt") << mixed_rep.table;
    std::ofstream(dir / "cactus.csv") << mixed_rep.cactus_csv;
    std::ofstream(dir / "scatter.csv") << mixed_rep.scatter_csv;
  }
  auto row = [](const bench::Report& r, const std::string& s) {
    for (const auto& x : r.rows) {
      if (x.strategy == s) return x;
    }
    return bench::StrategyRow{};
  };
  const auto hs = row(hard_rep, "standard"), hc = row(hard_rep, "ctg"), he = row(hard_rep, "exctg"),
             hd = row(hard_rep, "dynamic");
  const auto me = row(mixed_rep, "exctg"), md = row(mixed_rep, "dynamic");
  const bool order = hs.solved <= hc.solved && hc.solved <= he.solved && hd.solved >= hc.solved;
  const bool par2 = md.par2 <= me.par2;
  const double secs = since(start);
  report(6, order && par2 && secs < 1800, "directional scalability",
         "solved on " + std::to_string(hard.size()) + " hard: standard " + std::to_string(hs.solved) + ", ctg " +
             std::to_string(hc.solved) + ", exctg " + std::to_string(he.solved) + ", dynamic " +
             std::to_string(hd.solved) + (order ? " (ordering holds)" : " (ordering violated)") +
             "; mixed PAR-2 dynamic " + fixed(md.par2, 2) + " vs exctg " + fixed(me.par2, 2) + "; " + fixed(secs) +
             " s");
}

void determinism(std::uint64_t seed) {
  const auto sub = families::sub_corpus(20);
  std::size_t runs = 0, differ = 0;
  std::string first;
  for (const auto& nc : sub) {
    const TransitionSystem ts = to_transition_system(nc.circuit);
    for (Strategy s : kStrategies) {
      EngineOptions opts;
      opts.seed = seed;
      Verdict a = check(ts, config(s), opts), b = check(ts, config(s), opts);
      ++runs;
      const bool same = a.result == b.result && a.stats.final_lemmas == b.stats.final_lemmas &&
                        a.stats.lemma_events == b.stats.lemma_events &&
                        a.stats.query_trace_hash == b.stats.query_trace_hash;
      if (!same) {
        ++differ;
        if (first.empty()) first = nc.name + "/" + to_string(s);
      }
    }
  }
  report(7, differ == 0, "determinism",
         std::to_string(runs) + " repeated runs with seed " + std::to_string(seed) + ", " + std::to_string(differ) +
             " differ" + (first.empty() ? "" : ", first: " + first));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs the acceptance criteria and prints one line per criterion."};
  std::vector<int> only;
  double hard_limit = 60;
  double corpus_limit = 60;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  std::string out = (fs::temp_directory_path() / "dynpdr_acceptance").string();
  app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 7))->delimiter(',');
  app.add_option("--hard-limit", hard_limit, "per-run limit for the hard family, seconds");
  app.add_option("--corpus-limit", corpus_limit, "per-run limit on the small corpus, seconds");
  app.add_option("--jobs", jobs, "parallel benchmark children");
  app.add_option("--seed", seed, "solver seed for the determinism check");
  app.add_option("--out", out, "directory for trace files and benchmark results");
  CLI11_PARSE(app, argc, argv);

  auto want = [&](int n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };
  fs::create_directories(out);
  if (want(1) || want(2)) corpus_checks(want(1), want(2), corpus_limit);
  if (want(3)) {
    fs::create_directories(fs::path(out) / "traces");
    coincidence(fs::path(out) / "traces");
  }
  if (want(4)) branch_table();
  if (want(5)) frame_invariants();
  if (want(6)) scalability(fs::path(out) / "bench", hard_limit, jobs);
  if (want(7)) determinism(seed);
  return any_failed ? 1 : 0;
}
