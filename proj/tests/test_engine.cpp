#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "dynpdr/engine.hpp"
#include "dynpdr/families.hpp"
#include "dynpdr/oracle.hpp"
#include "support.hpp"

using namespace dynpdr;

namespace {

Verdict run(const AigerCircuit& c, Strategy s, EngineOptions opts = {}) {
  return check(to_transition_system(c), test::config(s), opts);
}

}  // namespace

TEST_CASE("constant false property is safe with an empty invariant") {
  const AigerCircuit c = test::aag("aag 0 0 0 1 0\n0\n");
  for (Strategy s : test::kAllStrategies) {
    Verdict v = run(c, s);
    CHECK(v.result == VerdictKind::Safe);
    CHECK(v.invariant.empty());
    CHECK(oracle::check_invariant(c, v.invariant).ok());
  }
}

TEST_CASE("bad initial state gives a one-step trace") {
  const AigerCircuit c = test::aag("aag 1 0 1 1 0\n2 2 0\n3\n");
  Verdict v = run(c, Strategy::Standard);
  REQUIRE(v.result == VerdictKind::Unsafe);
  CHECK(v.trace.size() == 1);
  CHECK(oracle::replay_trace(c, v.trace).ok);
}

TEST_CASE("toggle is unsafe after one step") {
  const AigerCircuit c = test::aag("aag 1 0 1 1 0\n2 3\n2\n");
  for (Strategy s : test::kAllStrategies) {
    Verdict v = run(c, s);
    REQUIRE(v.result == VerdictKind::Unsafe);
    REQUIRE(v.trace.size() == 2);
    CHECK(v.trace[0].state == Cube{Lit(1, true)});
    CHECK(v.trace[1].state == Cube{Lit(1, false)});
    CHECK(oracle::replay_trace(c, v.trace).ok);
    CHECK(v.invariant.empty());
  }
}

TEST_CASE("counter wrapping before the bad value is safe and certified") {
  // 3 bits, 0..3 then back to 0; bad when the value is 5
  const AigerCircuit c = families::counter(3, 4, 5, false);
  CHECK(oracle::brute_force_reachable(c).verdict == oracle::OracleVerdict::Safe);
  for (Strategy s : test::kAllStrategies) {
    Verdict v = run(c, s);
    REQUIRE(v.result == VerdictKind::Safe);
    CHECK_FALSE(v.invariant.empty());
    CHECK(oracle::check_invariant(c, v.invariant).ok());
    CHECK(v.trace.empty());
  }
}

TEST_CASE("verdicts agree with explicit reachability on generated circuits") {
  for (const auto& nc : families::small_corpus(80, 12, 101)) {
    CAPTURE(nc.name);
    auto truth = oracle::brute_force_reachable(nc.circuit);
    for (Strategy s : test::kAllStrategies) {
      CAPTURE(to_string(s));
      Verdict v = run(nc.circuit, s);
      if (truth.verdict == oracle::OracleVerdict::Safe) {
        REQUIRE(v.result == VerdictKind::Safe);
        CHECK(oracle::check_invariant(nc.circuit, v.invariant).ok());
      } else {
        REQUIRE(v.result == VerdictKind::Unsafe);
        CHECK(oracle::replay_trace(nc.circuit, v.trace).ok);
        // BFS depth is the shortest counterexample
        CHECK(v.trace.size() >= truth.depth + 1);
      }
    }
  }
}

TEST_CASE("successor activity passed to each obligation") {
  for (const auto& nc : families::small_corpus(40, 14, 7)) {
    CAPTURE(nc.name);
    std::map<std::uint64_t, std::uint64_t> failures;
    std::map<std::uint64_t, Activity> born_with;
    std::map<std::uint64_t, FrameIdx> frame_of;
    std::uint64_t bad_checks = 0, generalized = 0;
    EngineOptions opts;
    opts.hooks.on_obligation = [&](std::uint64_t id, std::optional<std::uint64_t> parent, FrameIdx frame,
                                   Activity sact) {
      born_with[id] = sact;
      frame_of[id] = frame;
      if (parent) {
        CHECK(sact == failures[*parent]);
        CHECK(frame + 1 == frame_of[*parent]);
        CHECK(sact >= 1);
      } else {
        CHECK(sact == 0);
      }
      ++bad_checks;
    };
    opts.hooks.on_relind_failed = [&](std::uint64_t id) { ++failures[id]; };
    opts.hooks.on_generalize = [&](std::uint64_t id, Activity sact, const Cube&) {
      CHECK(sact == born_with[id]);
      ++generalized;
    };
    Verdict v = run(nc.circuit, Strategy::Dynamic, opts);
    CHECK(v.result != VerdictKind::Unknown);
    CHECK(v.stats.obligations == bad_checks);
    std::uint64_t total = 0, most = 0;
    for (auto& [id, n] : failures) {
      total += n;
      most = std::max(most, n);
    }
    CHECK(v.stats.relind_failures == total);
    CHECK(v.stats.max_activity == most);
    std::uint64_t branches = 0;
    for (auto n : v.stats.gen.dyn_branches) branches += n;
    CHECK(branches == generalized);
  }
}

TEST_CASE("frame invariants hold after every propagation") {
  for (const auto& nc : families::small_corpus(30, 14, 55)) {
    CAPTURE(nc.name);
    for (Strategy s : test::kAllStrategies) {
      EngineOptions opts;
      std::size_t audits = 0;
      opts.hooks.after_propagate = [&](const FrameSequence& f) {
        for (const auto& msg : f.audit()) FAIL_CHECK(msg);
        ++audits;
      };
      Verdict v = run(nc.circuit, s, opts);
      CHECK(v.result != VerdictKind::Unknown);
      if (v.result == VerdictKind::Safe) CHECK(audits >= 1);
    }
  }
}

TEST_CASE("same seed, same run") {
  for (const auto& nc : families::small_corpus(20, 14, 3)) {
    for (Strategy s : test::kAllStrategies) {
      for (std::uint64_t seed : {0u, 5u}) {
        EngineOptions opts;
        opts.seed = seed;
        Verdict a = run(nc.circuit, s, opts), b = run(nc.circuit, s, opts);
        CHECK(a.result == b.result);
        CHECK(a.stats.query_trace_hash == b.stats.query_trace_hash);
        CHECK(a.stats.lemma_trace_hash == b.stats.lemma_trace_hash);
        CHECK(a.stats.final_lemmas == b.stats.final_lemmas);
        CHECK(a.invariant == b.invariant);
        CHECK(a.trace == b.trace);
      }
    }
  }
}

TEST_CASE("exctg reduces to standard and ctg at the engine level") {
  for (const auto& nc : families::small_corpus(40, 14, 77)) {
    CAPTURE(nc.name);
    const TransitionSystem ts = to_transition_system(nc.circuit);
    std::ostringstream q_std, q_ex0, l_ctg, l_ex1;
    EngineOptions o;

    StrategyConfig std_cfg = test::config(Strategy::Standard);
    o.query_trace = &q_std;
    check(ts, std_cfg, o);

    StrategyConfig ex0 = test::config(Strategy::Exctg);
    ex0.ctg_lv = 0;
    o.query_trace = &q_ex0;
    check(ts, ex0, o);
    CHECK(q_std.str() == q_ex0.str());

    o.query_trace = nullptr;
    StrategyConfig ctg = test::config(Strategy::Ctg);
    o.lemma_trace = &l_ctg;
    check(ts, ctg, o);

    StrategyConfig ex1 = test::config(Strategy::Exctg);
    ex1.exctg_limit = 1;
    o.lemma_trace = &l_ex1;
    check(ts, ex1, o);
    CHECK(l_ctg.str() == l_ex1.str());
  }
}

TEST_CASE("running out of time gives unknown") {
  const TransitionSystem ts = to_transition_system(families::ladder(8, 4, 177, true));
  for (Strategy s : test::kAllStrategies) {
    EngineOptions opts;
    opts.time_limit = std::chrono::milliseconds(50);
    Verdict v = check(ts, test::config(s), opts);
    CHECK(v.result == VerdictKind::Unknown);
    CHECK(v.reason.find("time") != std::string::npos);
    CHECK(v.invariant.empty());
    CHECK(v.trace.empty());
    CHECK(v.stats.seconds < 2.0);
  }
}
