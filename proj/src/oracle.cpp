#include "dynpdr/oracle.hpp"

#include <algorithm>
#include <optional>

#include "dynpdr/sat.hpp"

namespace dynpdr::oracle {

StateSet::StateSet(unsigned universe_bits)
    : bits_(universe_bits), words_(((std::uint64_t{1} << universe_bits) + 63) / 64, 0) {}

bool StateSet::insert(std::uint64_t s) {
  std::uint64_t& w = words_[s >> 6];
  std::uint64_t m = std::uint64_t{1} << (s & 63);
  if (w & m) return false;
  w |= m;
  ++count_;
  return true;
}

namespace {

// 64 lanes of circuit evaluation at once.
class Simulator {
 public:
  Simulator(const AigerCircuit& c, PropertySelection sel)
      : c_(c), gates_(c.ands), props_(property_literals(c, sel)), val_(c.max_var_index + 1, 0) {
    std::sort(gates_.begin(), gates_.end(), [](const AigAnd& a, const AigAnd& b) { return a.lhs < b.lhs; });
    for (const AigAnd& g : gates_) {
      if (g.lhs <= g.rhs0 || g.lhs <= g.rhs1) throw std::invalid_argument("gate not in topological order");
    }
  }

  void set_latch(std::size_t i, std::uint64_t lanes) { val_[c_.latches[i].current >> 1] = lanes; }
  void set_input(std::size_t j, std::uint64_t lanes) { val_[c_.inputs[j] >> 1] = lanes; }

  void eval() {
    for (const AigAnd& g : gates_) val_[g.lhs >> 1] = lit(g.rhs0) & lit(g.rhs1);
  }

  std::uint64_t lit(AigLit l) const {
    std::uint64_t v = val_[l >> 1];
    return (l & 1) ? ~v : v;
  }
  std::uint64_t next(std::size_t i) const { return lit(c_.latches[i].next); }
  std::uint64_t bad() const {
    std::uint64_t b = 0;
    for (AigLit p : props_) b |= lit(p);
    return b;
  }

 private:
  const AigerCircuit& c_;
  std::vector<AigAnd> gates_;
  std::vector<AigLit> props_;
  std::vector<std::uint64_t> val_;
};

std::vector<std::uint64_t> initial_states(const AigerCircuit& c) {
  std::uint64_t fixed = 0;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < c.latches.size(); ++i) {
    const AigLatch& l = c.latches[i];
    if (l.uninitialized()) {
      free.push_back(i);
    } else if (l.reset == 1) {
      fixed |= std::uint64_t{1} << i;
    }
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
    std::uint64_t s = fixed;
    for (std::size_t k = 0; k < free.size(); ++k) {
      if ((m >> k) & 1) s |= std::uint64_t{1} << free[k];
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

Reachability brute_force_reachable(const AigerCircuit& c, PropertySelection sel) {
  const std::size_t L = c.latches.size(), I = c.inputs.size();
  if (L + I > kMaxBits) {
    throw TooLarge("explicit search needs latches + inputs <= " + std::to_string(kMaxBits) + ", got " +
                   std::to_string(L + I));
  }
  Simulator sim(c, sel);
  Reachability r{StateSet(static_cast<unsigned>(L)), OracleVerdict::Safe, 0};

  std::vector<std::uint64_t> frontier;
  for (std::uint64_t s : initial_states(c)) {
    if (r.reachable.insert(s)) frontier.push_back(s);
  }

  const std::uint64_t input_mask = (std::uint64_t{1} << I) - 1;
  std::size_t depth = 0;
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next_frontier;
    bool hit = false;
    const std::uint64_t pairs = static_cast<std::uint64_t>(frontier.size()) << I;
    for (std::uint64_t base = 0; base < pairs; base += 64) {
      const unsigned lanes = static_cast<unsigned>(std::min<std::uint64_t>(64, pairs - base));
      for (std::size_t i = 0; i < L; ++i) {
        std::uint64_t w = 0;
        for (unsigned b = 0; b < lanes; ++b) w |= ((frontier[(base + b) >> I] >> i) & 1) << b;
        sim.set_latch(i, w);
      }
      for (std::size_t j = 0; j < I; ++j) {
        std::uint64_t w = 0;
        for (unsigned b = 0; b < lanes; ++b) w |= (((base + b) & input_mask) >> j & 1) << b;
        sim.set_input(j, w);
      }
      sim.eval();
      const std::uint64_t live = lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
      if (sim.bad() & live) hit = true;
      std::vector<std::uint64_t> nx(L);
      for (std::size_t i = 0; i < L; ++i) nx[i] = sim.next(i);
      for (unsigned b = 0; b < lanes; ++b) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < L; ++i) s |= ((nx[i] >> b) & 1) << i;
        if (r.reachable.insert(s)) next_frontier.push_back(s);
      }
    }
    if (hit) {
      r.verdict = OracleVerdict::Unsafe;
      r.depth = depth;
      return r;
    }
    if (next_frontier.empty()) break;
    frontier = std::move(next_frontier);
    ++depth;
  }
  r.depth = depth;
  return r;
}

std::vector<Clause> complement_clauses(const StateSet& s) {
  std::vector<Clause> out;
  const unsigned n = s.universe_bits();
  for (std::uint64_t st = 0; st < s.universe_size(); ++st) {
    if (s.contains(st)) continue;
    std::vector<Lit> lits;
    for (unsigned i = 0; i < n; ++i) lits.emplace_back(1 + i, ((st >> i) & 1) != 0);
    out.push_back(Clause::from_sorted(std::move(lits)));
  }
  return out;
}

namespace {

// Tseitin encoding of the circuit written against the raw AIGER structure.
class Encoder {
 public:
  explicit Encoder(const AigerCircuit& c) : c_(c) {
    const Var zero = s_.new_var();
    s_.add_clause({Lit(zero, true)});
    map_.assign(c.max_var_index + 1, Lit(zero, false));
    for (AigLit in : c.inputs) map_[in >> 1] = Lit(s_.new_var(), false);
    for (const AigLatch& l : c.latches) map_[l.current >> 1] = Lit(s_.new_var(), false);
    for (const AigAnd& g : c.ands) map_[g.lhs >> 1] = Lit(s_.new_var(), false);
    for (const AigAnd& g : c.ands) {
      Lit o = lit(g.lhs), a = lit(g.rhs0), b = lit(g.rhs1);
      s_.add_clause({~o, a});
      s_.add_clause({~o, b});
      s_.add_clause({o, ~a, ~b});
    }
  }

  Lit lit(AigLit l) const { return map_[l >> 1] ^ ((l & 1) != 0); }
  Lit state(std::size_t i) const { return lit(c_.latches[i].current); }

  // Fresh variables equal to the next-state functions.
  std::vector<Lit> next_copy() {
    std::vector<Lit> out;
    for (const AigLatch& l : c_.latches) {
      Lit n(s_.new_var(), false), f = lit(l.next);
      s_.add_clause({~n, f});
      s_.add_clause({n, ~f});
      out.push_back(n);
    }
    return out;
  }

  void assert_initial() {
    for (const AigLatch& l : c_.latches) {
      if (l.uninitialized()) continue;
      s_.add_clause({l.reset == 1 ? lit(l.current) : ~lit(l.current)});
    }
  }

  void assert_clauses(const std::vector<Clause>& inv, const std::vector<Lit>& over) {
    for (const Clause& cl : inv) {
      std::vector<Lit> out;
      for (Lit l : cl) out.push_back(over[l.var() - 1] ^ l.negated());
      s_.add_clause(out);
    }
  }

  // Requires at least one clause to be false.
  void assert_violated(const std::vector<Clause>& inv, const std::vector<Lit>& over) {
    std::vector<Lit> some;
    for (const Clause& cl : inv) {
      Lit a(s_.new_var(), false);
      for (Lit l : cl) s_.add_clause({~a, ~(over[l.var() - 1] ^ l.negated())});
      some.push_back(a);
    }
    s_.add_clause(some);
  }

  void assert_bad(const std::vector<AigLit>& props) {
    std::vector<Lit> any;
    for (AigLit p : props) any.push_back(lit(p));
    s_.add_clause(any);
  }

  bool unsat() { return s_.solve() == sat::Result::Unsat; }

 private:
  const AigerCircuit& c_;
  sat::CdclSolver s_;
  std::vector<Lit> map_;
};

std::vector<Lit> current_copy(const Encoder& e, std::size_t n) {
  std::vector<Lit> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(e.state(i));
  return out;
}

}  // namespace

InvariantReport check_invariant(const AigerCircuit& c, const std::vector<Clause>& inv, PropertySelection sel) {
  InvariantReport rep;
  const std::size_t L = c.latches.size();
  for (const Clause& cl : inv) {
    for (Lit l : cl) {
      if (l.var() < 1 || l.var() > L) rep.well_formed = false;
    }
  }
  if (!rep.well_formed) return rep;
  const std::vector<AigLit> props = property_literals(c, sel);

  if (inv.empty()) {
    rep.initiation = rep.consecution = true;
  } else {
    Encoder e1(c);
    e1.assert_initial();
    e1.assert_violated(inv, current_copy(e1, L));
    rep.initiation = e1.unsat();

    Encoder e2(c);
    e2.assert_clauses(inv, current_copy(e2, L));
    e2.assert_violated(inv, e2.next_copy());
    rep.consecution = e2.unsat();
  }

  Encoder e3(c);
  e3.assert_clauses(inv, current_copy(e3, L));
  e3.assert_bad(props);
  rep.safety = e3.unsat();
  return rep;
}

namespace {

std::optional<std::uint64_t> decode(const Cube& cube, Var first, std::size_t n) {
  if (cube.size() != n) return std::nullopt;
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cube[i].var() != first + i) return std::nullopt;
    if (!cube[i].negated()) bits |= std::uint64_t{1} << i;
  }
  return bits;
}

}  // namespace

ReplayReport replay_trace(const AigerCircuit& c, const std::vector<TraceStep>& trace, PropertySelection sel) {
  const std::size_t L = c.latches.size(), I = c.inputs.size();
  if (L > 64 || I > 64) return {false, 0, "circuit too wide for replay"};
  if (trace.empty()) return {false, 0, "empty trace"};
  Simulator sim(c, sel);
  std::vector<std::uint64_t> states, inputs;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    auto s = decode(trace[t].state, 1, L);
    auto y = decode(trace[t].input, static_cast<Var>(1 + L), I);
    if (!s) return {false, t, "state cube is not a full assignment"};
    if (!y) return {false, t, "input cube is not a full assignment"};
    states.push_back(*s);
    inputs.push_back(*y);
  }
  for (std::size_t i = 0; i < L; ++i) {
    const AigLatch& l = c.latches[i];
    if (!l.uninitialized() && ((states[0] >> i) & 1) != l.reset) return {false, 0, "first state is not initial"};
  }
  for (std::size_t t = 0; t < trace.size(); ++t) {
    for (std::size_t i = 0; i < L; ++i) sim.set_latch(i, (states[t] >> i) & 1);
    for (std::size_t j = 0; j < I; ++j) sim.set_input(j, (inputs[t] >> j) & 1);
    sim.eval();
    if (t + 1 == trace.size()) {
      if (!(sim.bad() & 1)) return {false, t, "final state does not violate the property"};
      break;
    }
    for (std::size_t i = 0; i < L; ++i) {
      if ((sim.next(i) & 1) != ((states[t + 1] >> i) & 1)) {
        return {false, t, "step " + std::to_string(t) + " is not a transition (latch " + std::to_string(i) + ")"};
      }
    }
  }
  return {true, 0, {}};
}

}  // namespace dynpdr::oracle
