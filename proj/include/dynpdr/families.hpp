#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynpdr/aiger.hpp"

// Parametric circuit generators for tests and desk-scale benchmarks.
namespace dynpdr::families {

// Builds circuits in the canonical binary order: inputs, latches, then
// gates. Gates are structurally hashed and constants folded.
class AigBuilder {
 public:
  AigBuilder(std::size_t num_inputs, std::size_t num_latches);

  AigLit input(std::size_t j) const { return static_cast<AigLit>(2 * (1 + j)); }
  AigLit latch(std::size_t i) const { return static_cast<AigLit>(2 * (1 + inputs_ + i)); }

  AigLit land(AigLit a, AigLit b);
  AigLit lor(AigLit a, AigLit b) { return land(a ^ 1, b ^ 1) ^ 1; }
  AigLit lxor(AigLit a, AigLit b) { return lor(land(a, b ^ 1), land(a ^ 1, b)); }
  AigLit leq(AigLit a, AigLit b) { return lxor(a, b) ^ 1; }
  AigLit mux(AigLit sel, AigLit t, AigLit e) { return lor(land(sel, t), land(sel ^ 1, e)); }
  AigLit land_all(const std::vector<AigLit>& lits);
  AigLit lor_all(const std::vector<AigLit>& lits);

  // Latch reset: 0, 1, or anything else for uninitialized.
  void set_latch(std::size_t i, AigLit next, int reset);
  void add_bad(AigLit b) { bad_.push_back(b); }
  void add_output(AigLit o) { outputs_.push_back(o); }

  AigerCircuit build() const;

 private:
  std::size_t inputs_;
  std::size_t latches_;
  std::uint32_t next_var_;
  std::vector<AigAnd> ands_;
  std::vector<AigLatch> latch_defs_;
  std::vector<AigLit> bad_;
  std::vector<AigLit> outputs_;
  std::unordered_map<std::uint64_t, AigLit> strash_;
};

struct NamedCircuit {
  std::string name;
  AigerCircuit circuit;
};

// One latch, next = ¬x, reset r; bad = x == bad_value.
AigerCircuit toggle(int reset, bool bad_value);

// Counter over `bits` latches counting 0, 1, ..., wrap-1, 0, ...; with
// `enable`, one input gates each increment. bad = (value == bad_value).
AigerCircuit counter(unsigned bits, std::uint64_t wrap, std::uint64_t bad_value, bool enable = false);

// Shift register fed by an input. Unsafe variant: bad = all ones (depth n).
// Safe variant: the feed is blocked while the head is 1, so two adjacent
// ones never appear; bad = some adjacent pair of ones.
AigerCircuit shift_chain(unsigned n, bool safe);

// Random netlist. Bad is a conjunction of a few random literals so that a
// healthy share of instances is safe.
AigerCircuit random_netlist(unsigned latches, unsigned inputs, unsigned gates, std::uint64_t seed);

// Ladder circuits. Each rung is a `bits`-wide counter that counts modulo
// `wrap` or, when its load input is high, takes the shared data word if that
// word is below wrap. Values from wrap up to the top value are unreachable
// but form a predecessor chain ending in a state with no predecessor; a rung
// reaching the top value sets a sticky flag, and bad = flag. The unsafe
// variant lets the last rung load top - 2.
AigerCircuit ladder(unsigned bits, unsigned rungs, std::uint64_t wrap, bool safe);

// Safe ladders with 22 to 33 latches. Two wrap values per shape, drawn
// uniformly from (top/2, top-1) with a fixed seed.
std::vector<NamedCircuit> hard_family();

// The small-model corpus: at least `count` circuits with latches + inputs
// <= max_bits, deterministic in `seed`.
std::vector<NamedCircuit> small_corpus(std::size_t count, unsigned max_bits, std::uint64_t seed);

// The default corpus, small_corpus(240, 16, 1).
std::vector<NamedCircuit> default_corpus();
// n circuits taken at an even stride from the default corpus.
std::vector<NamedCircuit> sub_corpus(std::size_t n = 20);

}  // namespace dynpdr::families
