#include "dynpdr/engine.hpp"

#include <algorithm>
#include <new>

#include "dynpdr/context.hpp"

namespace dynpdr {

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Safe: return "safe";
    case VerdictKind::Unsafe: return "unsafe";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

struct Timeout {};

class Engine {
 public:
  Engine(const TransitionSystem& ts, const StrategyConfig& cfg, const EngineOptions& opts)
      : ts_(ts), cfg_(cfg), opts_(opts), query_log_(opts.query_trace), lemma_log_(opts.lemma_trace) {
    if (opts.time_limit) {
      deadline_ = sat::Clock::now() + std::chrono::duration_cast<sat::Clock::duration>(*opts.time_limit);
    }
  }

  Verdict run() {
    const auto start = sat::Clock::now();
    Verdict v;
    try {
      FrameSequence::Options fo;
      fo.factory = opts_.solver_factory ? opts_.solver_factory : default_solver_factory(opts_.seed);
      fo.deadline = deadline_;
      fo.query_log = &query_log_;
      fo.lemma_log = &lemma_log_;
      fo.counters = &counters_;
      FrameSequence frames(ts_, fo);
      Generalizer gen(frames, opts_.order, v.stats.gen);
      frames_ = &frames;
      gen_ = &gen;
      main_loop(v);
      v.depth = frames.depth();
      v.stats.final_lemmas = frames.num_lemmas();
    } catch (const SolverFailure& e) {
      const bool late = deadline_ && sat::Clock::now() >= *deadline_;
      v = unknown(std::move(v), late ? "time limit reached" : e.what());
    } catch (const Timeout&) {
      v = unknown(std::move(v), "time limit reached");
    } catch (const std::bad_alloc&) {
      v = unknown(std::move(v), "out of memory");
    }
    frames_ = nullptr;
    gen_ = nullptr;
    v.stats.sat_queries = counters_.sat;
    v.stats.unsat_queries = counters_.unsat;
    v.stats.query_trace_hash = query_log_.hash();
    v.stats.lemma_trace_hash = lemma_log_.hash();
    v.stats.lemma_events = lemma_log_.count();
    v.stats.obligations = next_id_;
    v.stats.relind_failures = failures_;
    v.stats.max_activity = max_activity_;
    v.stats.seconds = std::chrono::duration<double>(sat::Clock::now() - start).count();
    return v;
  }

 private:
  static Verdict unknown(Verdict v, std::string reason) {
    v.result = VerdictKind::Unknown;
    v.invariant.clear();
    v.trace.clear();
    v.reason = std::move(reason);
    return v;
  }

  void tick() const {
    if (deadline_ && sat::Clock::now() >= *deadline_) throw Timeout{};
  }

  void main_loop(Verdict& v) {
    FrameSequence& frames = *frames_;
    if (auto m = frames.find_bad(0)) {
      v.result = VerdictKind::Unsafe;
      v.trace.push_back({get_predecessor(ts_, *m), input_cube(ts_, *m)});
      return;
    }
    while (true) {
      const FrameIdx k = frames.depth();
      while (auto m = frames.find_bad(k)) {
        tick();
        path_.clear();
        Cube c = get_predecessor(ts_, *m);
        path_.push_back({c, input_cube(ts_, *m)});
        if (!block(c, k, 0, std::nullopt)) {
          v.result = VerdictKind::Unsafe;
          v.trace.assign(path_.rbegin(), path_.rend());
          return;
        }
      }
      frames.push_frame();
      auto fix = frames.propagate();
      if (opts_.hooks.after_propagate) opts_.hooks.after_propagate(frames);
      if (fix) {
        v.result = VerdictKind::Safe;
        v.invariant = frames.extract_invariant();
        return;
      }
    }
  }

  // path_ holds the obligation chain from the bad state down to c; on a
  // false return it is left in place as the counterexample.
  bool block(const Cube& c, FrameIdx i, Activity sact, std::optional<std::uint64_t> parent) {
    const std::uint64_t id = next_id_++;
    if (opts_.hooks.on_obligation) opts_.hooks.on_obligation(id, parent, i, sact);
    if (i == 0 || intersects_initial(ts_, c)) return false;
    Activity act = 0;
    while (auto m = frames_->relind(c, i - 1)) {
      tick();
      ++act;
      ++failures_;
      max_activity_ = std::max<std::uint64_t>(max_activity_, act);
      if (opts_.hooks.on_relind_failed) opts_.hooks.on_relind_failed(id);
      Cube p = get_predecessor(ts_, *m);
      path_.push_back({p, input_cube(ts_, *m)});
      if (!block(p, i - 1, act, id)) return false;
      path_.pop_back();
    }
    Cube g = gen_->generalize(c, i - 1, cfg_, sact);
    if (opts_.hooks.on_generalize) opts_.hooks.on_generalize(id, sact, g);
    frames_->add_lemma(g, i);
    gen_->note_lemma(g);
    return true;
  }

  const TransitionSystem& ts_;
  const StrategyConfig& cfg_;
  const EngineOptions& opts_;
  std::optional<sat::Clock::time_point> deadline_;
  TraceLog query_log_;
  TraceLog lemma_log_;
  QueryCounters counters_;
  FrameSequence* frames_ = nullptr;
  Generalizer* gen_ = nullptr;
  std::vector<TraceStep> path_;
  std::uint64_t next_id_ = 0;
  std::uint64_t failures_ = 0;
  std::uint64_t max_activity_ = 0;
};

}  // namespace

Verdict check(const TransitionSystem& ts, const StrategyConfig& cfg, const EngineOptions& opts) {
  cfg.validate();
  return Engine(ts, cfg, opts).run();
}

}  // namespace dynpdr
