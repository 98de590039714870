#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dynpdr/frames.hpp"
#include "dynpdr/logic.hpp"

namespace dynpdr {

enum class Strategy { Standard, Ctg, Exctg, Dynamic };

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

// Number of failed relative-induction attempts while blocking an
// obligation; the difficulty measure that drives the dynamic strategy.
using Activity = std::uint64_t;

struct StrategyConfig {
  Strategy kind = Strategy::Dynamic;
  unsigned ctg_lv = 1;
  unsigned ctg_max = 3;
  unsigned exctg_limit = 5;
  unsigned ctg_th = 10;
  unsigned exctg_th = 40;

  // Throws std::invalid_argument on an inconsistent parameter set.
  void validate() const;
  std::string summary() const;
};

// The parameters one generalization call actually runs with.
struct GenParams {
  unsigned ctg_lv = 0;
  unsigned ctg_max = 0;
  unsigned exctg_limit = 1;
};

enum class DynBranch { Standard = 0, Ctg = 1, Exctg = 2 };

struct DynChoice {
  DynBranch branch;
  GenParams params;
};

// Branch and parameters the dynamic strategy picks for a successor
// activity. CTG_MAX uses floor division, EXCTG_LIMIT rounds half up.
DynChoice strategy_params(Activity sact, const StrategyConfig& cfg);
unsigned dyn_ctg_max(Activity sact, unsigned ctg_th);
unsigned dyn_exctg_limit(Activity sact, unsigned exctg_th);

enum class LitOrder { Ascending, Descending, Activity };

LitOrder parse_lit_order(const std::string& name);

struct GenStats {
  std::uint64_t calls = 0;
  std::uint64_t literals_dropped = 0;
  std::uint64_t ctg_blocks = 0;
  std::uint64_t exctg_blocks = 0;
  std::uint64_t exctg_budget_exhausted = 0;
  std::array<std::uint64_t, 3> dyn_branches{};
};

// Literal-dropping generalization over a frame sequence. Every routine
// issues its relative-induction queries through the frames' contexts, so
// the query trace reflects exactly the work each strategy performs.
class Generalizer {
 public:
  Generalizer(FrameSequence& frames, LitOrder order, GenStats& stats);

  // Dispatches on cfg.kind. sact is only read by the dynamic strategy.
  Cube generalize(const Cube& c, FrameIdx i, const StrategyConfig& cfg, Activity sact);

  // Standard: down-based literal dropping.
  Cube standard_generalize(const Cube& c, FrameIdx i);
  bool down(Cube& c, FrameIdx i);

  // CTG: block counterexamples to generalization up to ctg_max in a row,
  // recursing ctg_lv levels deep.
  Cube ctg_generalize(const Cube& c, FrameIdx i, unsigned cl, const GenParams& p);
  bool ctg_down(Cube& c, FrameIdx i, unsigned cl, const GenParams& p);

  // EXCTG: like CTG, but a failed CTG block recursively blocks the CTG's
  // own predecessors under a shared budget. Covers all three static
  // strategies: cl = 0 is Standard, exctg_limit = 1 is CTG.
  Cube exctg_generalize(const Cube& c, FrameIdx i, unsigned cl, const GenParams& p);
  bool exctg_down(Cube& c, FrameIdx i, unsigned cl, const GenParams& p);
  // Blocks c at frame i (relative to F_{i-1}); `limit` is shared by the
  // whole recursion and spent once per invocation.
  bool exctg_block(const Cube& c, FrameIdx i, unsigned& limit, unsigned cl, const GenParams& p);

  Cube dyn_generalize(const Cube& c, FrameIdx i, Activity sact, const StrategyConfig& cfg);

  // Records that a lemma over these literals was learnt (activity order).
  void note_lemma(const Cube& c);

 private:
  std::vector<Lit> drop_order(const Cube& c) const;
  void add_lemma(const Cube& gen, FrameIdx i);

  FrameSequence& frames_;
  const TransitionSystem& ts_;
  LitOrder order_;
  GenStats& stats_;
  std::vector<double> var_activity_;
};

}  // namespace dynpdr
