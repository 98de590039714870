#include "dynpdr/context.hpp"

#include <functional>
#include <ostream>

namespace dynpdr {

SolverFactory default_solver_factory(std::uint64_t seed) {
  return [seed] { return std::make_unique<sat::CdclSolver>(seed); };
}

void TraceLog::record(const std::string& line) {
  ++count_;
  hash_ = hash_ * 1099511628211ull ^ std::hash<std::string>{}(line);
  if (sink_) *sink_ << line << '\n';
}

Cube get_predecessor(const TransitionSystem& ts, const Model& m) {
  std::vector<Lit> lits;
  lits.reserve(ts.num_latches());
  for (std::size_t i = 0; i < ts.num_latches(); ++i) lits.emplace_back(ts.state_var(i), !m.state[i]);
  return Cube::from_sorted(std::move(lits));
}

Cube input_cube(const TransitionSystem& ts, const Model& m) {
  std::vector<Lit> lits;
  lits.reserve(ts.num_inputs());
  for (std::size_t i = 0; i < ts.num_inputs(); ++i) lits.emplace_back(ts.input_var(i), !m.input[i]);
  return Cube::from_sorted(std::move(lits));
}

SatContext::SatContext(Shared shared, FrameIdx frame) : shared_(std::move(shared)), frame_(frame) {
  rebuild();
}

void SatContext::rebuild() {
  solver_ = shared_.factory();
  solver_->set_deadline(shared_.deadline);
  solver_->reserve_var(shared_.ts->num_vars() - 1);
  for (const auto& cl : shared_.trans->clauses) solver_->add_clause(cl);
  for (const auto& cl : permanent_) solver_->add_clause(cl);
  base_vars_ = solver_->num_vars();
}

void SatContext::add_blocking_clause(const Cube& blocked) {
  std::vector<Lit> cl;
  cl.reserve(blocked.size());
  for (Lit l : blocked) cl.push_back(~l);
  solver_->add_clause(cl);
  permanent_.push_back(std::move(cl));
}

void SatContext::add_units(const Cube& cube) {
  for (Lit l : cube) {
    solver_->add_clause({l});
    permanent_.push_back({l});
  }
}

sat::Result SatContext::run(std::span<const Lit> assumptions) {
  sat::Result r = solver_->solve(assumptions);
  if (r == sat::Result::Unknown) throw SolverFailure("SAT backend gave up at frame " + std::to_string(frame_));
  if (shared_.counters) {
    if (r == sat::Result::Sat) {
      ++shared_.counters->sat;
    } else {
      ++shared_.counters->unsat;
    }
  }
  return r;
}

void SatContext::log(const std::string& what, sat::Result r) {
  if (!shared_.query_log) return;
  shared_.query_log->record(std::to_string(frame_) + ' ' + what + ' ' +
                            (r == sat::Result::Sat ? "SAT" : "UNSAT"));
}

Model SatContext::extract_model() const {
  const TransitionSystem& ts = *shared_.ts;
  Model m;
  m.state.resize(ts.num_latches());
  m.next.resize(ts.num_latches());
  m.input.resize(ts.num_inputs());
  for (std::size_t i = 0; i < ts.num_latches(); ++i) {
    m.state[i] = solver_->model_value(ts.state_var(i));
    m.next[i] = solver_->model_value(ts.next_var(i));
  }
  for (std::size_t i = 0; i < ts.num_inputs(); ++i) m.input[i] = solver_->model_value(ts.input_var(i));
  return m;
}

std::optional<Model> SatContext::relind(const Cube& c) {
  // Dead activation variables accumulate; start over once they dominate.
  if (solver_->num_vars() > 2 * base_vars_ + 20000) rebuild();
  const TransitionSystem& ts = *shared_.ts;
  Lit act(solver_->new_var(), false);
  std::vector<Lit> guard{~act};
  for (Lit l : c) guard.push_back(~l);
  solver_->add_clause(guard);

  std::vector<Lit> assumptions{act};
  for (Lit l : prime(ts, c)) assumptions.push_back(l);
  sat::Result r;
  try {
    r = run(assumptions);
  } catch (...) {
    solver_->add_clause({~act});
    throw;
  }
  std::optional<Model> out;
  if (r == sat::Result::Sat) out = extract_model();
  solver_->add_clause({~act});
  log(to_string(c), r);
  return out;
}

std::optional<Model> SatContext::find_bad() {
  Lit bad = shared_.ts->bad();
  std::vector<Lit> assumptions{bad};
  sat::Result r = run(assumptions);
  log("bad", r);
  if (r == sat::Result::Sat) return extract_model();
  return std::nullopt;
}

std::optional<Model> SatContext::solve_under(const Cube& assumptions, const std::string& label) {
  sat::Result r = run(assumptions.lits());
  log(label, r);
  if (r == sat::Result::Sat) return extract_model();
  return std::nullopt;
}

}  // namespace dynpdr
