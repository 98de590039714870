#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynpdr/aiger.hpp"
#include "dynpdr/engine.hpp"
#include "dynpdr/generalize.hpp"

namespace test {

using namespace dynpdr;

inline AigerCircuit aag(std::string_view text) { return parse_aiger(text); }

inline constexpr Strategy kAllStrategies[] = {Strategy::Standard, Strategy::Ctg, Strategy::Exctg,
                                              Strategy::Dynamic};

inline StrategyConfig config(Strategy s) {
  StrategyConfig cfg;
  cfg.kind = s;
  return cfg;
}

// Scalar evaluation straight from the AIGER structure, for tests that need a
// reference independent of the CNF encoding.
struct Sim {
  const AigerCircuit& c;
  std::vector<char> val;

  explicit Sim(const AigerCircuit& circuit) : c(circuit), val(circuit.max_var_index + 1, 0) {}

  bool lit(AigLit l) const { return (l >> 1) == 0 ? (l & 1) : (val[l >> 1] != 0) != ((l & 1) != 0); }

  // Latch i takes bit i of state, input j bit j of input.
  void eval(std::uint64_t state, std::uint64_t input) {
    for (std::size_t i = 0; i < c.latches.size(); ++i) val[c.latches[i].current >> 1] = (state >> i) & 1;
    for (std::size_t j = 0; j < c.inputs.size(); ++j) val[c.inputs[j] >> 1] = (input >> j) & 1;
    std::vector<AigAnd> gates = c.ands;
    std::sort(gates.begin(), gates.end(), [](const AigAnd& a, const AigAnd& b) { return a.lhs < b.lhs; });
    for (const AigAnd& g : gates) val[g.lhs >> 1] = lit(g.rhs0) && lit(g.rhs1);
  }

  std::uint64_t next_state() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < c.latches.size(); ++i) s |= std::uint64_t{lit(c.latches[i].next)} << i;
    return s;
  }

  bool bad() const {
    for (AigLit l : property_literals(c)) {
      if (lit(l)) return true;
    }
    return false;
  }

  bool initial(std::uint64_t state) const {
    for (std::size_t i = 0; i < c.latches.size(); ++i) {
      const AigLatch& l = c.latches[i];
      if (l.uninitialized()) continue;
      if (((state >> i) & 1) != l.reset) return false;
    }
    return true;
  }
};

// Latch-bit state index of a full cube in the engine numbering.
inline std::uint64_t state_of(const Cube& c) {
  std::uint64_t s = 0;
  for (Lit l : c) {
    if (!l.negated()) s |= std::uint64_t{1} << (l.var() - 1);
  }
  return s;
}

inline bool cube_holds(const Cube& c, std::uint64_t state) {
  for (Lit l : c) {
    if ((((state >> (l.var() - 1)) & 1) != 0) == l.negated()) return false;
  }
  return true;
}

}  // namespace test
