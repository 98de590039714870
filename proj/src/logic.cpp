#include "dynpdr/logic.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace dynpdr {

template <class Tag>
LitSet<Tag>::LitSet(std::vector<Lit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  for (std::size_t i = 1; i < lits_.size(); ++i) {
    if (lits_[i].var() == lits_[i - 1].var()) {
      throw LogicError("literal set mentions variable " + std::to_string(lits_[i].var()) +
                       " with both signs");
    }
  }
}

template <class Tag>
bool LitSet<Tag>::contains(Lit l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

template <class Tag>
LitSet<Tag> LitSet<Tag>::without(Lit l) const {
  std::vector<Lit> out;
  out.reserve(lits_.size());
  for (Lit x : lits_) {
    if (x != l) out.push_back(x);
  }
  return from_sorted(std::move(out));
}

template <class Tag>
LitSet<Tag> LitSet<Tag>::intersect(const LitSet& other) const {
  std::vector<Lit> out;
  std::set_intersection(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                        std::back_inserter(out));
  return from_sorted(std::move(out));
}

template class LitSet<detail::CubeTag>;
template class LitSet<detail::ClauseTag>;

namespace {

template <class Out, class In>
Out negate_set(const In& in) {
  std::vector<Lit> out;
  out.reserve(in.size());
  for (Lit l : in) out.push_back(~l);
  // Negation flips the low bit only, so var order is preserved but the two
  // signs of one var never coexist; the sequence stays sorted by var.
  return Out::from_sorted(std::move(out));
}

}  // namespace

Clause negate(const Cube& c) { return negate_set<Clause>(c); }
Cube negate(const Clause& c) { return negate_set<Cube>(c); }

template <class Tag>
bool subsumes(const LitSet<Tag>& a, const LitSet<Tag>& b) {
  if (a.size() > b.size()) return false;
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template bool subsumes(const Cube&, const Cube&);
template bool subsumes(const Clause&, const Clause&);

std::string to_string(Lit l) {
  return (l.negated() ? "-" : "") + std::to_string(l.var());
}

template <class Tag>
std::string to_string(const LitSet<Tag>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += to_string(s[i]);
  }
  return out + "]";
}

template std::string to_string(const Cube&);
template std::string to_string(const Clause&);

TransitionSystem::TransitionSystem(std::size_t num_latches, std::size_t num_inputs)
    : num_latches_(num_latches),
      num_inputs_(num_inputs),
      num_vars_(static_cast<Var>(1 + 2 * num_latches + num_inputs)),
      next_(num_latches, kFalse) {}

std::size_t TransitionSystem::latch_of(Var v) const {
  if (is_state_var(v)) return v - 1;
  if (is_next_var(v)) return v - 1 - num_latches_ - num_inputs_;
  throw LogicError("variable " + std::to_string(v) + " is not a state variable");
}

void TransitionSystem::add_gate(AndGate g) {
  if (g.lhs >= num_vars_) num_vars_ = g.lhs + 1;
  gates_.push_back(g);
}

void TransitionSystem::set_init(Cube init) {
  for (Lit l : init) {
    if (!is_state_var(l.var())) throw LogicError("initial cube mentions non-state " + to_string(l));
  }
  init_ = std::move(init);
}

Cube prime(const TransitionSystem& ts, const Cube& c) {
  std::vector<Lit> out;
  out.reserve(c.size());
  for (Lit l : c) {
    if (!ts.is_state_var(l.var())) {
      throw LogicError("prime: " + to_string(l) + " is not a state literal");
    }
    out.emplace_back(ts.next_var(ts.latch_of(l.var())), l.negated());
  }
  return Cube::from_sorted(std::move(out));
}

Cube unprime(const TransitionSystem& ts, const Cube& c) {
  std::vector<Lit> out;
  out.reserve(c.size());
  for (Lit l : c) {
    if (!ts.is_next_var(l.var())) {
      throw LogicError("unprime: " + to_string(l) + " is not a next-state literal");
    }
    out.emplace_back(ts.state_var(ts.latch_of(l.var())), l.negated());
  }
  return Cube::from_sorted(std::move(out));
}

bool intersects_initial(const TransitionSystem& ts, const Cube& c) {
  const Cube& init = ts.init();
  auto i = init.begin();
  auto j = c.begin();
  while (i != init.end() && j != c.end()) {
    if (i->var() < j->var()) {
      ++i;
    } else if (j->var() < i->var()) {
      ++j;
    } else {
      if (*i != *j) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

CnfFormula encode_transition(const TransitionSystem& ts) {
  CnfFormula cnf;
  cnf.num_vars = ts.num_vars();
  bool uses_const = ts.bad().var() == 0;
  auto add = [&](std::vector<Lit> cl) {
    std::sort(cl.begin(), cl.end());
    for (Lit l : cl) uses_const |= l.var() == 0;
    cnf.clauses.push_back(std::move(cl));
  };
  for (const AndGate& g : ts.gates()) {
    Lit out(g.lhs, false);
    add({~out, g.rhs0});
    add({~out, g.rhs1});
    add({out, ~g.rhs0, ~g.rhs1});
  }
  for (std::size_t i = 0; i < ts.num_latches(); ++i) {
    Lit nx(ts.next_var(i), false);
    add({~nx, ts.next(i)});
    add({nx, ~ts.next(i)});
  }
  if (uses_const) cnf.clauses.push_back({~kFalse});
  return cnf;
}

void write_dimacs(std::ostream& os, const CnfFormula& cnf) {
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& cl : cnf.clauses) {
    for (Lit l : cl) {
      os << (l.negated() ? "-" : "") << (l.var() + 1) << ' ';
    }
    os << "0\n";
  }
}

}  // namespace dynpdr
