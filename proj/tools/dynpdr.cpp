// dynpdr: check AIGER safety properties with IC3 and benchmark the
// generalization strategies against each other.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dynpdr/aiger.hpp"
#include "dynpdr/bench.hpp"
#include "dynpdr/certificate.hpp"
#include "dynpdr/engine.hpp"
#include "dynpdr/families.hpp"
#include "dynpdr/oracle.hpp"

namespace fs = std::filesystem;
using namespace dynpdr;

namespace {

constexpr int kExitError = 3;

struct StrategyFlags {
  std::string strategy = "dynamic";
  StrategyConfig cfg;

  void add(CLI::App* app, bool with_strategy) {
    if (with_strategy) {
      app->add_option("--strategy", strategy, "standard, ctg, exctg or dynamic")
          ->check(CLI::IsMember({"standard", "ctg", "exctg", "dynamic"}));
    }
    app->add_option("--ctg-max", cfg.ctg_max, "CTGs blocked in a row before giving up on a literal");
    app->add_option("--ctg-lv", cfg.ctg_lv, "CTG recursion depth");
    app->add_option("--exctg-limit", cfg.exctg_limit, "EXCTG block budget per CTG");
    app->add_option("--ctg-th", cfg.ctg_th, "activity at which dynamic switches to CTG");
    app->add_option("--exctg-th", cfg.exctg_th, "activity at which dynamic switches to EXCTG");
  }
};

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
  if (opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("DYNPDR_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("DYNPDR_SEED is not a number: ") + env);
    }
  }
  return 0;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

void print_stats(std::ostream& os, const Verdict& v) {
  const EngineStats& s = v.stats;
  os << "stats:\n"
     << "  depth: " << v.depth << '\n'
     << "  seconds: " << s.seconds << '\n'
     << "  sat_queries: " << s.sat_queries << '\n'
     << "  unsat_queries: " << s.unsat_queries << '\n'
     << "  obligations: " << s.obligations << '\n'
     << "  relind_failures: " << s.relind_failures << '\n'
     << "  max_activity: " << s.max_activity << '\n'
     << "  lemma_events: " << s.lemma_events << '\n'
     << "  final_lemmas: " << s.final_lemmas << '\n'
     << "  generalize_calls: " << s.gen.calls << '\n'
     << "  literals_dropped: " << s.gen.literals_dropped << '\n'
     << "  ctg_blocks: " << s.gen.ctg_blocks << '\n'
     << "  exctg_blocks: " << s.gen.exctg_blocks << '\n'
     << "  exctg_budget_exhausted: " << s.gen.exctg_budget_exhausted << '\n'
     << "  dynamic_branches: standard=" << s.gen.dyn_branches[0] << " ctg=" << s.gen.dyn_branches[1]
     << " exctg=" << s.gen.dyn_branches[2] << '\n'
     << "  query_trace_hash: " << std::hex << s.query_trace_hash << '\n'
     << "  lemma_trace_hash: " << s.lemma_trace_hash << std::dec << '\n';
}

struct CheckArgs {
  std::string file;
  StrategyFlags flags;
  bool certify = false;
  bool stats = false;
  std::string witness, invariant, query_trace, lemma_trace, dimacs, order = "ascending";
  std::uint64_t seed = 0;
  const CLI::Option* seed_opt = nullptr;
  std::optional<std::size_t> property;
  double time_limit = 0;
};

int run_check(const CheckArgs& a) {
  StrategyConfig cfg = a.flags.cfg;
  cfg.kind = parse_strategy(a.flags.strategy);

  AigerCircuit circuit;
  try {
    circuit = read_aiger_file(a.file);
  } catch (const AigerError& e) {
    std::cerr << a.file << ": " << e.what() << " (" << to_string(e.kind()) << " at byte " << e.offset() << ")\n";
    return kExitError;
  }
  PropertySelection sel{a.property};
  TransitionSystem ts = to_transition_system(circuit, sel);

  if (!a.dimacs.empty()) {
    auto os = open_out(a.dimacs);
    write_dimacs(os, encode_transition(ts));
  }

  EngineOptions opts;
  opts.order = parse_lit_order(a.order);
  opts.seed = resolve_seed(a.seed_opt, a.seed);
  if (a.time_limit > 0) opts.time_limit = std::chrono::duration<double>(a.time_limit);
  std::ofstream qt, lt;
  if (!a.query_trace.empty()) {
    qt = open_out(a.query_trace);
    opts.query_trace = &qt;
  }
  if (!a.lemma_trace.empty()) {
    lt = open_out(a.lemma_trace);
    opts.lemma_trace = &lt;
  }

  Verdict v = check(ts, cfg, opts);
  std::cout << to_string(v.result) << '\n';
  if (v.result == VerdictKind::Unknown) std::cerr << "unknown: " << v.reason << '\n';
  if (a.stats) print_stats(std::cerr, v);

  if (a.certify && v.result != VerdictKind::Unknown) {
    if (v.result == VerdictKind::Safe) {
      auto rep = oracle::check_invariant(circuit, v.invariant, sel);
      if (!rep.ok()) {
        std::cerr << "certification failed: well_formed=" << rep.well_formed << " initiation=" << rep.initiation
                  << " consecution=" << rep.consecution << " safety=" << rep.safety << '\n';
        return kExitError;
      }
    } else {
      auto rep = oracle::replay_trace(circuit, v.trace, sel);
      if (!rep.ok) {
        std::cerr << "certification failed at step " << rep.step << ": " << rep.reason << '\n';
        return kExitError;
      }
    }
    std::cerr << "certified\n";
  }

  if (v.result == VerdictKind::Unsafe) {
    const std::size_t prop = a.property.value_or(0);
    if (a.witness.empty()) {
      write_witness(std::cout, circuit, v.trace, prop);
    } else {
      auto os = open_out(a.witness);
      write_witness(os, circuit, v.trace, prop);
    }
  }
  if (v.result == VerdictKind::Safe && !a.invariant.empty()) {
    auto os = open_out(a.invariant);
    if (fs::path(a.invariant).extension() == ".aag") {
      os << write_aag(invariant_circuit(circuit, v.invariant));
    } else {
      write_invariant_text(os, v.invariant);
    }
  }
  return v.result == VerdictKind::Safe ? 0 : v.result == VerdictKind::Unsafe ? 1 : 2;
}

std::vector<std::string> aiger_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".aag" || ext == ".aig")) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

void write_circuit(const fs::path& dir, const std::string& name, const AigerCircuit& c) {
  auto os = open_out((dir / (name + ".aag")).string());
  os << write_aag(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IC3 model checker for AIGER safety properties"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "check one AIGER file");
  check_cmd->add_option("file", ca.file, "AIGER file (.aag or .aig)")->required()->check(CLI::ExistingFile);
  ca.flags.add(check_cmd, true);
  check_cmd->add_flag("--certify", ca.certify, "re-check the verdict independently");
  check_cmd->add_option("--witness", ca.witness, "write the counterexample here instead of stdout");
  check_cmd->add_option("--invariant", ca.invariant, "write the invariant (.aag for a circuit, else text)");
  ca.seed_opt = check_cmd->add_option("--seed", ca.seed, "solver seed (default: $DYNPDR_SEED or 0)");
  check_cmd->add_option("--property", ca.property, "check only this bad/output index");
  check_cmd->add_option("--order", ca.order, "literal drop order")
      ->check(CLI::IsMember({"ascending", "descending", "activity"}));
  check_cmd->add_option("--query-trace", ca.query_trace, "log every SAT query");
  check_cmd->add_option("--lemma-trace", ca.lemma_trace, "log every lemma");
  check_cmd->add_option("--dimacs", ca.dimacs, "dump the transition relation CNF");
  check_cmd->add_option("--time-limit", ca.time_limit, "seconds, 0 for none");
  check_cmd->add_flag("--stats", ca.stats, "print statistics to stderr");

  std::string bench_dir, bench_out;
  std::vector<std::string> strategies{"standard", "ctg", "exctg", "dynamic"};
  bench::RunLimits limits;
  unsigned jobs = 1;
  std::uint64_t bench_seed = 0;
  StrategyFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "run strategies over a directory of circuits");
  bench_cmd->add_option("dir", bench_dir)->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--strategies", strategies, "comma separated")->delimiter(',');
  bench_cmd->add_option("--time-limit", limits.time_limit, "seconds per case")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--memory", limits.memory_mb, "megabytes per case");
  bench_cmd->add_option("--jobs", jobs, "concurrent cases")->check(CLI::PositiveNumber);
  auto* bench_seed_opt = bench_cmd->add_option("--seed", bench_seed);
  bench_cmd->add_option("--out", bench_out, "results CSV");
  bench_flags.add(bench_cmd, false);

  std::string report_in, baseline = "standard", cactus_out, scatter_out;
  auto* report_cmd = app.add_subcommand("report", "summarize a results CSV");
  report_cmd->add_option("results", report_in)->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--baseline", baseline);
  report_cmd->add_option("--cactus", cactus_out, "write cactus plot data");
  report_cmd->add_option("--scatter", scatter_out, "write scatter plot data");

  std::string gen_dir;
  std::size_t gen_count = 200;
  unsigned gen_bits = 16;
  std::uint64_t gen_seed = 1;
  bool gen_hard = false;
  auto* gen_cmd = app.add_subcommand("gen", "write the built-in circuit families as .aag files");
  gen_cmd->add_option("dir", gen_dir)->required();
  gen_cmd->add_option("--count", gen_count, "small circuits");
  gen_cmd->add_option("--max-bits", gen_bits, "latch plus input bits per small circuit");
  gen_cmd->add_option("--seed", gen_seed);
  gen_cmd->add_flag("--hard", gen_hard, "also write the scaled ladder family");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check_cmd->parsed()) return run_check(ca);

    if (bench_cmd->parsed()) {
      std::vector<bench::BenchJob> work;
      const auto files = aiger_files(bench_dir);
      for (const std::string& name : split_list(strategies)) {
        StrategyConfig cfg = bench_flags.cfg;
        cfg.kind = parse_strategy(name);
        cfg.validate();
        for (const std::string& f : files) work.push_back({f, name, cfg});
      }
      auto records = bench::run_all(work, limits, jobs, resolve_seed(bench_seed_opt, bench_seed));
      if (!bench_out.empty()) {
        auto os = open_out(bench_out);
        bench::write_csv(os, records);
      } else {
        bench::write_csv(std::cout, records);
      }
      if (!records.empty()) {
        const std::string base = split_list(strategies).front();
        std::cerr << bench::compare(records, base).table;
      }
      return 0;
    }

    if (report_cmd->parsed()) {
      std::ifstream is(report_in);
      auto rep = bench::compare(bench::read_csv(is), baseline);
      std::cout << rep.table;
      if (!cactus_out.empty()) open_out(cactus_out) << rep.cactus_csv;
      if (!scatter_out.empty()) open_out(scatter_out) << rep.scatter_csv;
      return 0;
    }

    if (gen_cmd->parsed()) {
      fs::create_directories(gen_dir);
      for (const auto& nc : families::small_corpus(gen_count, gen_bits, gen_seed)) {
        write_circuit(gen_dir, nc.name, nc.circuit);
      }
      if (gen_hard) {
        for (const auto& nc : families::hard_family()) write_circuit(gen_dir, nc.name, nc.circuit);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
