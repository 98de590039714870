#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <sstream>

#include "dynpdr/aiger.hpp"
#include "dynpdr/certificate.hpp"
#include "dynpdr/engine.hpp"
#include "dynpdr/families.hpp"
#include "dynpdr/oracle.hpp"

namespace py = pybind11;
using namespace dynpdr;

namespace {

std::vector<int> lits_of(const Cube& c) {
  std::vector<int> out;
  for (Lit l : c) out.push_back(l.negated() ? -static_cast<int>(l.var()) : static_cast<int>(l.var()));
  return out;
}

AigerCircuit load(const std::string& source) {
  if (source.rfind("aag ", 0) == 0 || source.rfind("aig ", 0) == 0) return parse_aiger(std::string_view(source));
  return read_aiger_file(source);
}

py::dict run_check(const std::string& source, const std::string& strategy, std::optional<double> time_limit,
                   std::uint64_t seed, unsigned ctg_max, unsigned ctg_lv, unsigned exctg_limit, unsigned ctg_th,
                   unsigned exctg_th, bool certify) {
  const AigerCircuit c = load(source);
  StrategyConfig cfg;
  cfg.kind = parse_strategy(strategy);
  cfg.ctg_max = ctg_max;
  cfg.ctg_lv = ctg_lv;
  cfg.exctg_limit = exctg_limit;
  cfg.ctg_th = ctg_th;
  cfg.exctg_th = exctg_th;
  cfg.validate();
  EngineOptions opts;
  opts.seed = seed;
  if (time_limit) opts.time_limit = std::chrono::duration<double>(*time_limit);
  Verdict v;
  {
    py::gil_scoped_release release;
    v = check(to_transition_system(c), cfg, opts);
  }
  py::dict out;
  out["result"] = to_string(v.result);
  out["depth"] = v.depth;
  out["reason"] = v.reason;
  std::vector<std::vector<int>> inv;
  for (const Clause& cl : v.invariant) {
    std::vector<int> row;
    for (Lit l : cl) row.push_back(l.negated() ? -static_cast<int>(l.var()) : static_cast<int>(l.var()));
    inv.push_back(row);
  }
  out["invariant"] = inv;
  py::list trace;
  for (const TraceStep& s : v.trace) trace.append(py::make_tuple(lits_of(s.state), lits_of(s.input)));
  out["trace"] = trace;
  if (v.result == VerdictKind::Unsafe) {
    std::ostringstream w;
    write_witness(w, c, v.trace);
    out["witness"] = w.str();
  }
  py::dict stats;
  stats["sat_queries"] = v.stats.sat_queries;
  stats["unsat_queries"] = v.stats.unsat_queries;
  stats["obligations"] = v.stats.obligations;
  stats["max_activity"] = v.stats.max_activity;
  stats["lemmas"] = v.stats.final_lemmas;
  stats["query_trace_hash"] = v.stats.query_trace_hash;
  stats["seconds"] = v.stats.seconds;
  out["stats"] = stats;
  if (certify) {
    if (v.result == VerdictKind::Safe) out["certified"] = oracle::check_invariant(c, v.invariant).ok();
    else if (v.result == VerdictKind::Unsafe) out["certified"] = oracle::replay_trace(c, v.trace).ok;
    else out["certified"] = py::none();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "IC3 model checking for AIGER circuits";

  py::register_exception<AigerError>(m, "AigerError", PyExc_ValueError);

  m.def("check", &run_check, py::arg("source"), py::arg("strategy") = "dynamic", py::arg("time_limit") = py::none(),
        py::arg("seed") = 0, py::arg("ctg_max") = 3, py::arg("ctg_lv") = 1, py::arg("exctg_limit") = 5,
        py::arg("ctg_th") = 10, py::arg("exctg_th") = 40, py::arg("certify") = true,
        "Check the property of an AIGER file, or of AIGER text starting with 'aag '.");

  m.def(
      "reachable",
      [](const std::string& source) {
        auto r = oracle::brute_force_reachable(load(source));
        py::dict out;
        out["result"] = r.verdict == oracle::OracleVerdict::Safe ? "safe" : "unsafe";
        out["depth"] = r.depth;
        out["states"] = r.reachable.count();
        return out;
      },
      py::arg("source"), "Explicit-state reachability for small circuits.");

  m.def(
      "strategy_params",
      [](std::uint64_t sact, unsigned ctg_th, unsigned exctg_th) {
        StrategyConfig cfg;
        cfg.ctg_th = ctg_th;
        cfg.exctg_th = exctg_th;
        DynChoice d = strategy_params(sact, cfg);
        static const char* names[] = {"standard", "ctg", "exctg"};
        py::dict out;
        out["branch"] = names[static_cast<int>(d.branch)];
        out["ctg_lv"] = d.params.ctg_lv;
        out["ctg_max"] = d.params.ctg_max;
        out["exctg_limit"] = d.params.exctg_limit;
        return out;
      },
      py::arg("sact"), py::arg("ctg_th") = 10, py::arg("exctg_th") = 40);

  m.def(
      "corpus",
      [](std::size_t count, unsigned max_bits, std::uint64_t seed) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& nc : families::small_corpus(count, max_bits, seed)) out.emplace_back(nc.name, write_aag(nc.circuit));
        return out;
      },
      py::arg("count") = 240, py::arg("max_bits") = 16, py::arg("seed") = 1,
      "Generated (name, aag text) pairs.");

  m.def("ladder", [](unsigned bits, unsigned rungs, std::uint64_t wrap, bool safe) {
    return write_aag(families::ladder(bits, rungs, wrap, safe));
  }, py::arg("bits"), py::arg("rungs"), py::arg("wrap"), py::arg("safe") = true);
}
