#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynpdr {

using Var = std::uint32_t;
using FrameIdx = std::size_t;

// A literal packed as 2*var + sign, the same convention AIGER uses.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negated) : code_(2 * v + (negated ? 1u : 0u)) {}

  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1u) != 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  constexpr Lit operator^(bool flip) const { return from_code(code_ ^ (flip ? 1u : 0u)); }

  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  std::uint32_t code_ = 0;
};

// Var 0 is the constant: its positive literal is false.
inline constexpr Lit kFalse = Lit(0, false);
inline constexpr Lit kTrue = Lit(0, true);

class LogicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
struct CubeTag {};
struct ClauseTag {};
}  // namespace detail

// Sorted, duplicate-free, consistent literal set. Cube and Clause share the
// representation and differ only in how the set is read.
template <class Tag>
class LitSet {
 public:
  LitSet() = default;
  LitSet(std::initializer_list<Lit> lits) : LitSet(std::vector<Lit>(lits)) {}
  explicit LitSet(std::vector<Lit> lits);

  // Caller guarantees the literals are already sorted, unique and consistent.
  static LitSet from_sorted(std::vector<Lit> lits) {
    LitSet s;
    s.lits_ = std::move(lits);
    return s;
  }

  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  Lit operator[](std::size_t i) const { return lits_[i]; }
  std::span<const Lit> lits() const { return lits_; }

  bool contains(Lit l) const;
  // Copy without l; returns *this unchanged when l is absent.
  LitSet without(Lit l) const;
  // Literals present in both sets.
  LitSet intersect(const LitSet& other) const;

  friend bool operator==(const LitSet&, const LitSet&) = default;
  friend auto operator<=>(const LitSet& a, const LitSet& b) { return a.lits_ <=> b.lits_; }

 private:
  std::vector<Lit> lits_;
};

using Cube = LitSet<detail::CubeTag>;
using Clause = LitSet<detail::ClauseTag>;

Clause negate(const Cube& c);
Cube negate(const Clause& c);

// a ⊆ b as literal sets.
template <class Tag>
bool subsumes(const LitSet<Tag>& a, const LitSet<Tag>& b);

std::string to_string(Lit l);
template <class Tag>
std::string to_string(const LitSet<Tag>& s);

struct AndGate {
  Var lhs;
  Lit rhs0;
  Lit rhs1;
};

// Variable layout: 0 constant, then X (latches), Y (inputs), X' (next
// state), then gate and auxiliary variables.
class TransitionSystem {
 public:
  TransitionSystem(std::size_t num_latches, std::size_t num_inputs);

  std::size_t num_latches() const { return num_latches_; }
  std::size_t num_inputs() const { return num_inputs_; }
  Var num_vars() const { return num_vars_; }

  Var state_var(std::size_t latch) const { return static_cast<Var>(1 + latch); }
  Var input_var(std::size_t input) const { return static_cast<Var>(1 + num_latches_ + input); }
  Var next_var(std::size_t latch) const {
    return static_cast<Var>(1 + num_latches_ + num_inputs_ + latch);
  }
  bool is_state_var(Var v) const { return v >= 1 && v <= num_latches_; }
  bool is_input_var(Var v) const { return v > num_latches_ && v <= num_latches_ + num_inputs_; }
  bool is_next_var(Var v) const {
    return v > num_latches_ + num_inputs_ && v <= 2 * num_latches_ + num_inputs_;
  }
  std::size_t latch_of(Var state_or_next) const;

  Var new_aux_var() { return num_vars_++; }
  void add_gate(AndGate g);
  void set_next(std::size_t latch, Lit next) { next_[latch] = next; }
  void set_init(Cube init);
  void set_bad(Lit bad) { bad_ = bad; }

  const std::vector<AndGate>& gates() const { return gates_; }
  Lit next(std::size_t latch) const { return next_[latch]; }
  const std::vector<Lit>& next_functions() const { return next_; }
  const Cube& init() const { return init_; }
  Lit bad() const { return bad_; }

 private:
  std::size_t num_latches_;
  std::size_t num_inputs_;
  Var num_vars_;
  std::vector<Lit> next_;
  std::vector<AndGate> gates_;
  Cube init_;
  Lit bad_ = kFalse;
};

// X -> X' on every literal; throws LogicError on a non-state literal.
Cube prime(const TransitionSystem& ts, const Cube& c);
Cube unprime(const TransitionSystem& ts, const Cube& c);

// I is a partial cube, so the intersection test is a syntactic scan.
bool intersects_initial(const TransitionSystem& ts, const Cube& c);

// One step of a counterexample: a full state cube and the full input cube
// applied in that state.
struct TraceStep {
  Cube state;
  Cube input;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct CnfFormula {
  Var num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
};

// Tseitin encoding of T: three clauses per AND gate, two per latch binding.
// A unit fixing the constant is added only when the constant is referenced.
CnfFormula encode_transition(const TransitionSystem& ts);

void write_dimacs(std::ostream& os, const CnfFormula& cnf);

}  // namespace dynpdr
