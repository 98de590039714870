#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynpdr/context.hpp"
#include "dynpdr/logic.hpp"

namespace dynpdr {

class NotAtFixpoint : public std::logic_error {
 public:
  NotAtFixpoint() : std::logic_error("no two adjacent frames are equal") {}
};

// F_0 .. F_k. Lemmas are kept as the cubes they block and stored only at
// their highest frame, so F_i is the union of the levels >= i and
// F_i \ F_{i+1} is exactly level i. F_0 is I and holds no lemmas.
class FrameSequence {
 public:
  struct Options {
    SolverFactory factory = default_solver_factory();
    std::optional<sat::Clock::time_point> deadline;
    TraceLog* query_log = nullptr;
    TraceLog* lemma_log = nullptr;
    QueryCounters* counters = nullptr;
  };

  FrameSequence(const TransitionSystem& ts, Options opts);
  FrameSequence(const FrameSequence&) = delete;
  FrameSequence& operator=(const FrameSequence&) = delete;

  const TransitionSystem& system() const { return ts_; }
  // k: index of the top frame.
  FrameIdx depth() const { return levels_.size() - 1; }
  // Appends F_{k+1} = ⊤.
  void push_frame();

  // Cubes stored exactly at level i (F_i \ F_{i+1} for i >= 1).
  const std::vector<Cube>& level(FrameIdx i) const { return levels_.at(i); }
  // Blocked cubes whose negations make up F_i; for i = 0 the unit cubes ¬l, l ∈ I.
  std::vector<Cube> frame_cubes(FrameIdx i) const;
  std::size_t num_lemmas() const;

  // Adds ¬blocked to F_1..F_i. Lemmas at levels <= i that the new one
  // subsumes are deleted; returns false when an existing lemma at a level
  // >= i already subsumes it.
  bool add_lemma(const Cube& blocked, FrameIdx i);

  // Pushes relatively inductive lemmas forward for i = 1..k-1 and returns
  // the first i with F_i = F_{i+1}.
  std::optional<FrameIdx> propagate();

  // F_i at the fixpoint found by the last propagate().
  std::vector<Clause> extract_invariant() const;
  std::optional<FrameIdx> fixpoint() const { return fixpoint_; }

  std::optional<Model> relind(const Cube& c, FrameIdx i) { return contexts_.at(i).relind(c); }
  std::optional<Model> find_bad(FrameIdx i) { return contexts_.at(i).find_bad(); }

  // Re-checks the frame invariants from scratch with fresh solvers and
  // returns one message per violation.
  std::vector<std::string> audit() const;

 private:
  SatContext::Shared shared() const;
  // Places a lemma at level i, applying subsumption in both directions.
  bool insert(const Cube& blocked, FrameIdx i);

  const TransitionSystem& ts_;
  Options opts_;
  CnfFormula trans_;
  std::vector<std::vector<Cube>> levels_;
  std::vector<SatContext> contexts_;
  std::optional<FrameIdx> fixpoint_;
};

}  // namespace dynpdr
