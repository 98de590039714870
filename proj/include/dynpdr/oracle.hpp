#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynpdr/aiger.hpp"
#include "dynpdr/logic.hpp"

// Ground-truth checks that work on the parsed circuit directly and share no
// encoding code with the engine. Cubes and clauses use the engine's variable
// numbering (latch i is var 1+i, input j is var 1+L+j), which is the only
// contract between the two sides.
namespace dynpdr::oracle {

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxBits = 24;

// Set of latch valuations; bit i of a state index is latch i.
class StateSet {
 public:
  explicit StateSet(unsigned universe_bits);

  unsigned universe_bits() const { return bits_; }
  bool contains(std::uint64_t s) const { return (words_[s >> 6] >> (s & 63)) & 1u; }
  // Returns true if s was new.
  bool insert(std::uint64_t s);
  std::size_t count() const { return count_; }
  std::uint64_t universe_size() const { return std::uint64_t{1} << bits_; }

 private:
  unsigned bits_;
  std::vector<std::uint64_t> words_;
  std::size_t count_ = 0;
};

enum class OracleVerdict { Safe, Unsafe };

struct Reachability {
  StateSet reachable;
  OracleVerdict verdict;
  // Minimal counterexample length in transitions (Unsafe); BFS diameter (Safe).
  std::size_t depth;
};

// Explicit BFS from every initial state. Throws TooLarge when
// latches + inputs exceed kMaxBits.
Reachability brute_force_reachable(const AigerCircuit& c, PropertySelection sel = {});

// Clause-wise complement of a state set: one full clause per excluded state.
std::vector<Clause> complement_clauses(const StateSet& s);

struct InvariantReport {
  bool well_formed = true;   // clauses only mention latch variables
  bool initiation = false;   // I ∧ ¬INV unsat
  bool consecution = false;  // INV ∧ T ∧ ¬INV' unsat
  bool safety = false;       // INV ∧ ¬P unsat
  bool ok() const { return well_formed && initiation && consecution && safety; }
};

InvariantReport check_invariant(const AigerCircuit& c, const std::vector<Clause>& inv,
                                PropertySelection sel = {});

struct ReplayReport {
  bool ok = false;
  std::size_t step = 0;  // index of the offending step when !ok
  std::string reason;
};

ReplayReport replay_trace(const AigerCircuit& c, const std::vector<TraceStep>& trace,
                          PropertySelection sel = {});

}  // namespace dynpdr::oracle
