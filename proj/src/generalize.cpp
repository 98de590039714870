#include "dynpdr/generalize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dynpdr/context.hpp"

namespace dynpdr {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Standard: return "standard";
    case Strategy::Ctg: return "ctg";
    case Strategy::Exctg: return "exctg";
    case Strategy::Dynamic: return "dynamic";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "standard") return Strategy::Standard;
  if (name == "ctg") return Strategy::Ctg;
  if (name == "exctg") return Strategy::Exctg;
  if (name == "dynamic") return Strategy::Dynamic;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

LitOrder parse_lit_order(const std::string& name) {
  if (name == "ascending") return LitOrder::Ascending;
  if (name == "descending") return LitOrder::Descending;
  if (name == "activity") return LitOrder::Activity;
  throw std::invalid_argument("unknown literal order '" + name + "'");
}

void StrategyConfig::validate() const {
  if (kind != Strategy::Standard && ctg_max < 1) throw std::invalid_argument("ctg_max must be >= 1");
  if (exctg_limit < 1) throw std::invalid_argument("exctg_limit must be >= 1");
  if (kind == Strategy::Dynamic && ctg_th >= exctg_th) {
    throw std::invalid_argument("ctg_th must be below exctg_th");
  }
}

std::string StrategyConfig::summary() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case Strategy::Standard: break;
    case Strategy::Ctg: os << "(lv=" << ctg_lv << ",max=" << ctg_max << ")"; break;
    case Strategy::Exctg:
      os << "(lv=" << ctg_lv << ",max=" << ctg_max << ",limit=" << exctg_limit << ")";
      break;
    case Strategy::Dynamic: os << "(th=" << ctg_th << "/" << exctg_th << ")"; break;
  }
  return os.str();
}

unsigned dyn_ctg_max(Activity sact, unsigned ctg_th) {
  return static_cast<unsigned>((sact - ctg_th) / 10 + 2);
}

unsigned dyn_exctg_limit(Activity sact, unsigned exctg_th) {
  double x = std::pow(static_cast<double>(sact - exctg_th), 0.3) * 2.0 + 5.0;
  return static_cast<unsigned>(std::floor(x + 0.5));
}

DynChoice strategy_params(Activity sact, const StrategyConfig& cfg) {
  if (sact < cfg.ctg_th) return {DynBranch::Standard, {0, cfg.ctg_max, 1}};
  if (sact < cfg.exctg_th) return {DynBranch::Ctg, {1, dyn_ctg_max(sact, cfg.ctg_th), 1}};
  return {DynBranch::Exctg, {1, 5, dyn_exctg_limit(sact, cfg.exctg_th)}};
}

Generalizer::Generalizer(FrameSequence& frames, LitOrder order, GenStats& stats)
    : frames_(frames), ts_(frames.system()), order_(order), stats_(stats),
      var_activity_(frames.system().num_vars(), 0.0) {}

std::vector<Lit> Generalizer::drop_order(const Cube& c) const {
  std::vector<Lit> lits(c.begin(), c.end());
  switch (order_) {
    case LitOrder::Ascending: break;
    case LitOrder::Descending: std::reverse(lits.begin(), lits.end()); break;
    case LitOrder::Activity:
      std::stable_sort(lits.begin(), lits.end(), [this](Lit a, Lit b) {
        return var_activity_[a.var()] < var_activity_[b.var()];
      });
      break;
  }
  return lits;
}

void Generalizer::note_lemma(const Cube& c) {
  for (Lit l : c) var_activity_[l.var()] += 1.0;
}

void Generalizer::add_lemma(const Cube& gen, FrameIdx i) {
  frames_.add_lemma(gen, i);
  note_lemma(gen);
}

Cube Generalizer::generalize(const Cube& c, FrameIdx i, const StrategyConfig& cfg, Activity sact) {
  switch (cfg.kind) {
    case Strategy::Standard: return standard_generalize(c, i);
    case Strategy::Ctg: return ctg_generalize(c, i, cfg.ctg_lv, {cfg.ctg_lv, cfg.ctg_max, 1});
    case Strategy::Exctg:
      return exctg_generalize(c, i, cfg.ctg_lv, {cfg.ctg_lv, cfg.ctg_max, cfg.exctg_limit});
    case Strategy::Dynamic: return dyn_generalize(c, i, sact, cfg);
  }
  return c;
}

Cube Generalizer::standard_generalize(const Cube& c0, FrameIdx i) {
  ++stats_.calls;
  Cube c = c0;
  for (Lit l : drop_order(c0)) {
    if (!c.contains(l)) continue;
    Cube cand = c.without(l);
    if (down(cand, i)) {
      stats_.literals_dropped += c.size() - cand.size();
      c = std::move(cand);
    }
  }
  return c;
}

bool Generalizer::down(Cube& c, FrameIdx i) {
  while (true) {
    if (intersects_initial(ts_, c)) return false;
    std::optional<Model> w = frames_.relind(c, i);
    if (!w) return true;
    c = c.intersect(get_predecessor(ts_, *w));
  }
}

Cube Generalizer::ctg_generalize(const Cube& c0, FrameIdx i, unsigned cl, const GenParams& p) {
  ++stats_.calls;
  Cube c = c0;
  for (Lit l : drop_order(c0)) {
    if (!c.contains(l)) continue;
    Cube cand = c.without(l);
    if (ctg_down(cand, i, cl, p)) {
      stats_.literals_dropped += c.size() - cand.size();
      c = std::move(cand);
    }
  }
  return c;
}

bool Generalizer::ctg_down(Cube& c, FrameIdx i, unsigned cl, const GenParams& p) {
  unsigned num_ctg = 0;
  while (true) {
    if (intersects_initial(ts_, c)) return false;
    std::optional<Model> w = frames_.relind(c, i);
    if (!w) return true;
    Cube pred = get_predecessor(ts_, *w);
    if (cl > 0 && num_ctg < p.ctg_max && i > 0) {
      if (!intersects_initial(ts_, pred) && !frames_.relind(pred, i - 1)) {
        Cube gen = ctg_generalize(pred, i - 1, cl - 1, p);
        add_lemma(gen, i);
        ++num_ctg;
        ++stats_.ctg_blocks;
        continue;
      }
    }
    num_ctg = 0;
    c = c.intersect(pred);
  }
}

Cube Generalizer::exctg_generalize(const Cube& c0, FrameIdx i, unsigned cl, const GenParams& p) {
  ++stats_.calls;
  Cube c = c0;
  for (Lit l : drop_order(c0)) {
    if (!c.contains(l)) continue;
    Cube cand = c.without(l);
    if (exctg_down(cand, i, cl, p)) {
      stats_.literals_dropped += c.size() - cand.size();
      c = std::move(cand);
    }
  }
  return c;
}

bool Generalizer::exctg_down(Cube& c, FrameIdx i, unsigned cl, const GenParams& p) {
  unsigned num_ctg = 0;
  while (true) {
    if (intersects_initial(ts_, c)) return false;
    std::optional<Model> w = frames_.relind(c, i);
    if (!w) return true;
    Cube pred = get_predecessor(ts_, *w);
    if (cl > 0 && num_ctg < p.ctg_max && i > 0) {
      unsigned limit = p.exctg_limit;
      if (exctg_block(pred, i, limit, cl - 1, p)) {
        ++num_ctg;
        ++stats_.ctg_blocks;
        continue;
      }
    }
    num_ctg = 0;
    c = c.intersect(pred);
  }
}

bool Generalizer::exctg_block(const Cube& c, FrameIdx i, unsigned& limit, unsigned cl,
                              const GenParams& p) {
  if (i == 0 || intersects_initial(ts_, c)) return false;
  // A budget of n admits n invocations; with n = 1 only the CTG itself
  // is attempted, which makes this coincide with ctg_down.
  if (limit == 0) {
    ++stats_.exctg_budget_exhausted;
    return false;
  }
  --limit;
  while (true) {
    std::optional<Model> w = frames_.relind(c, i - 1);
    if (!w) break;
    if (!exctg_block(get_predecessor(ts_, *w), i - 1, limit, cl, p)) return false;
  }
  Cube gen = exctg_generalize(c, i - 1, cl, p);
  add_lemma(gen, i);
  ++stats_.exctg_blocks;
  return true;
}

Cube Generalizer::dyn_generalize(const Cube& c, FrameIdx i, Activity sact, const StrategyConfig& cfg) {
  DynChoice choice = strategy_params(sact, cfg);
  ++stats_.dyn_branches[static_cast<std::size_t>(choice.branch)];
  return exctg_generalize(c, i, choice.params.ctg_lv, choice.params);
}

}  // namespace dynpdr
