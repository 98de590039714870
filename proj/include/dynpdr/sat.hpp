#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "dynpdr/logic.hpp"

namespace dynpdr::sat {

enum class Result { Sat, Unsat, Unknown };

using Clock = std::chrono::steady_clock;

// Incremental solving under assumptions. Clauses may be added between
// solve() calls; the model is valid until the next mutation.
class Solver {
 public:
  virtual ~Solver() = default;

  virtual Var new_var() = 0;
  virtual Var num_vars() const = 0;
  // Grows the variable range so that v is valid.
  void reserve_var(Var v) {
    while (num_vars() <= v) new_var();
  }

  virtual void add_clause(std::span<const Lit> lits) = 0;
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  virtual Result solve(std::span<const Lit> assumptions) = 0;
  Result solve() { return solve(std::span<const Lit>()); }

  virtual bool model_value(Var v) const = 0;
  bool model_value(Lit l) const { return model_value(l.var()) != l.negated(); }

  virtual void set_deadline(std::optional<Clock::time_point> deadline) = 0;
};

struct CdclStats {
  std::uint64_t solves = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
};

// Conflict-driven clause learning with two-watched literals, VSIDS,
// phase saving, Luby restarts and activity-based learnt clause deletion.
// Deterministic for a fixed seed; seed 0 disables all randomization.
class CdclSolver final : public Solver {
 public:
  explicit CdclSolver(std::uint64_t seed = 0);

  using Solver::add_clause;
  using Solver::model_value;
  using Solver::solve;

  Var new_var() override;
  Var num_vars() const override { return static_cast<Var>(assigns_.size()); }
  void add_clause(std::span<const Lit> lits) override;
  Result solve(std::span<const Lit> assumptions) override;
  bool model_value(Var v) const override { return model_[v]; }
  void set_deadline(std::optional<Clock::time_point> deadline) override { deadline_ = deadline; }

  const CdclStats& stats() const { return stats_; }
  std::size_t num_clauses() const { return num_original_; }
  std::size_t num_learnts() const { return learnts_.size(); }

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoRef = 0xffffffffu;
  enum : std::uint8_t { kTrue = 0, kFalse = 1, kUndef = 2 };

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  // Arena layout per clause: header word (size<<2 | learnt<<1 | deleted),
  // activity word, then the literals. Header words are stored as raw codes.
  std::uint32_t header(CRef c) const { return arena_[c].code(); }
  std::uint32_t clause_size(CRef c) const { return header(c) >> 2; }
  bool clause_learnt(CRef c) const { return (header(c) & 2u) != 0; }
  bool clause_deleted(CRef c) const { return (header(c) & 1u) != 0; }
  Lit* clause_lits(CRef c) { return &arena_[c + 2]; }
  const Lit* clause_lits(CRef c) const { return &arena_[c + 2]; }
  float clause_activity(CRef c) const { return std::bit_cast<float>(arena_[c + 1].code()); }
  void set_clause_activity(CRef c, float a) {
    arena_[c + 1] = Lit::from_code(std::bit_cast<std::uint32_t>(a));
  }

  CRef alloc_clause(std::span<const Lit> lits, bool learnt);
  void attach(CRef c);
  void remove_clause(CRef c);
  bool satisfied(CRef c) const;
  bool locked(CRef c) const;

  std::uint8_t value(Lit l) const {
    std::uint8_t v = assigns_[l.var()];
    return v == kUndef ? std::uint8_t{kUndef} : static_cast<std::uint8_t>(v ^ (l.negated() ? 1u : 0u));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit p, CRef from);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel);
  bool lit_redundant(Lit p, std::uint32_t abstract_levels);
  std::uint32_t abstract_level(Var v) const { return 1u << (level_[v] & 31); }
  void cancel_until(int level);
  Lit pick_branch();
  void reduce_db();
  void simplify();
  void garbage_collect();
  bool out_of_time();

  void var_bump(Var v);
  void var_decay() { var_inc_ /= 0.95; }
  void clause_bump(CRef c);
  void clause_decay() { cla_inc_ /= 0.999; }

  // Binary heap of unassigned vars ordered by activity.
  void heap_insert(Var v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  Var heap_pop();
  bool heap_contains(Var v) const { return v < heap_index_.size() && heap_index_[v] >= 0; }
  bool heap_less(Var a, Var b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  std::vector<Lit> arena_;
  std::size_t wasted_ = 0;
  std::vector<CRef> clauses_;
  std::vector<CRef> learnts_;
  std::size_t num_original_ = 0;

  std::vector<std::uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<std::uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<Var> heap_;
  std::vector<int> heap_index_;

  std::vector<std::uint8_t> seen_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_toclear_;

  std::vector<bool> model_;
  bool ok_ = true;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  std::size_t simp_trail_ = 0;

  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::optional<Clock::time_point> deadline_;
  CdclStats stats_;
};

}  // namespace dynpdr::sat
