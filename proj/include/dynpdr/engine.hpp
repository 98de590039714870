#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynpdr/frames.hpp"
#include "dynpdr/generalize.hpp"
#include "dynpdr/logic.hpp"

namespace dynpdr {

enum class VerdictKind { Safe, Unsafe, Unknown };

const char* to_string(VerdictKind k);

struct EngineStats {
  std::uint64_t sat_queries = 0;
  std::uint64_t unsat_queries = 0;
  std::uint64_t obligations = 0;
  std::uint64_t relind_failures = 0;
  std::uint64_t lemma_events = 0;  // lemma additions plus pushes
  std::uint64_t max_activity = 0;
  std::uint64_t query_trace_hash = 0;
  std::uint64_t lemma_trace_hash = 0;
  std::size_t final_lemmas = 0;
  GenStats gen;
  double seconds = 0;
};

struct Verdict {
  VerdictKind result = VerdictKind::Unknown;
  std::vector<Clause> invariant;   // Safe only
  std::vector<TraceStep> trace;    // Unsafe only, initial state first
  FrameIdx depth = 0;              // k at termination
  EngineStats stats;
  std::string reason;              // why Unknown
};

// Callbacks for tests and instrumentation; none of them may touch the
// frames. Obligation ids are assigned in creation order, 0 for each
// top-level bad state.
struct EngineHooks {
  std::function<void(std::uint64_t id, std::optional<std::uint64_t> parent, FrameIdx frame, Activity sact)>
      on_obligation;
  std::function<void(std::uint64_t id)> on_relind_failed;
  std::function<void(std::uint64_t id, Activity sact, const Cube& gen)> on_generalize;
  // After each propagation phase, with k already incremented.
  std::function<void(const FrameSequence& frames)> after_propagate;
};

struct EngineOptions {
  LitOrder order = LitOrder::Ascending;
  std::uint64_t seed = 0;
  std::optional<std::chrono::duration<double>> time_limit;
  // Solver override; default is the built-in CDCL solver with `seed`.
  SolverFactory solver_factory;
  std::ostream* query_trace = nullptr;
  std::ostream* lemma_trace = nullptr;
  EngineHooks hooks;
};

Verdict check(const TransitionSystem& ts, const StrategyConfig& cfg, const EngineOptions& opts = {});

}  // namespace dynpdr
