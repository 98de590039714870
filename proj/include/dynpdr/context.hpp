#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynpdr/logic.hpp"
#include "dynpdr/sat.hpp"

namespace dynpdr {

// Raised when the SAT backend gives up (deadline or resource exhaustion).
// Never to be read as UNSAT.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SolverFactory = std::function<std::unique_ptr<sat::Solver>()>;

SolverFactory default_solver_factory(std::uint64_t seed = 0);

// Append-only text trace with a running hash, one record per line.
class TraceLog {
 public:
  explicit TraceLog(std::ostream* sink = nullptr) : sink_(sink) {}

  void record(const std::string& line);
  std::uint64_t count() const { return count_; }
  std::uint64_t hash() const { return hash_; }

 private:
  std::ostream* sink_;
  std::uint64_t count_ = 0;
  std::uint64_t hash_ = 0;
};

// Assignment of a satisfying query restricted to X, Y and X'.
struct Model {
  std::vector<bool> state;
  std::vector<bool> input;
  std::vector<bool> next;
};

// Full cube over X taken from the model.
Cube get_predecessor(const TransitionSystem& ts, const Model& m);
// Full cube over Y taken from the model.
Cube input_cube(const TransitionSystem& ts, const Model& m);

struct QueryCounters {
  std::uint64_t sat = 0;
  std::uint64_t unsat = 0;
  std::uint64_t total() const { return sat + unsat; }
};

// One incremental solver holding T plus the lemmas of one frame. Queries
// are answered one at a time; temporary clauses are guarded by fresh
// activation literals that are released (fixed false) after the query.
class SatContext {
 public:
  struct Shared {
    const TransitionSystem* ts;
    const CnfFormula* trans;
    SolverFactory factory;
    std::optional<sat::Clock::time_point> deadline;
    TraceLog* query_log = nullptr;
    QueryCounters* counters = nullptr;
  };

  SatContext(Shared shared, FrameIdx frame);

  FrameIdx frame() const { return frame_; }

  // Permanently adds the clause ¬blocked.
  void add_blocking_clause(const Cube& blocked);
  // Permanently adds the literals of a cube as unit clauses.
  void add_units(const Cube& cube);

  // Is ¬c inductive relative to this frame? nullopt when the query
  // F ∧ ¬c ∧ T ∧ c' is UNSAT, otherwise the witness.
  std::optional<Model> relind(const Cube& c);
  // A state of this frame with an input that raises the bad literal.
  std::optional<Model> find_bad();
  // F ∧ T under the given assumption literals.
  std::optional<Model> solve_under(const Cube& assumptions, const std::string& label);

 private:
  void rebuild();
  sat::Result run(std::span<const Lit> assumptions);
  Model extract_model() const;
  void log(const std::string& what, sat::Result r);

  Shared shared_;
  FrameIdx frame_;
  std::unique_ptr<sat::Solver> solver_;
  std::vector<std::vector<Lit>> permanent_;
  Var base_vars_ = 0;
};

}  // namespace dynpdr
