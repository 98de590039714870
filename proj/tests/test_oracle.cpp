#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dynpdr/engine.hpp"
#include "dynpdr/families.hpp"
#include "dynpdr/oracle.hpp"
#include "support.hpp"

using namespace dynpdr;
using oracle::OracleVerdict;

TEST_CASE("toggle is unsafe at depth one") {
  auto r = oracle::brute_force_reachable(test::aag("aag 1 0 1 1 0\n2 3\n2\n"));
  CHECK(r.verdict == OracleVerdict::Unsafe);
  CHECK(r.depth == 1);
  CHECK(r.reachable.count() == 2);
}

TEST_CASE("counter reaches exactly its wrap range") {
  auto r = oracle::brute_force_reachable(families::counter(3, 4, 5, false));
  CHECK(r.verdict == OracleVerdict::Safe);
  CHECK(r.reachable.count() == 4);
  for (std::uint64_t s = 0; s < 8; ++s) CHECK(r.reachable.contains(s) == (s < 4));
  CHECK(r.depth == 3);
}

TEST_CASE("bad initial state has depth zero") {
  auto r = oracle::brute_force_reachable(test::aag("aag 1 0 1 1 0\n2 2 0\n3\n"));
  CHECK(r.verdict == OracleVerdict::Unsafe);
  CHECK(r.depth == 0);
}

TEST_CASE("uninitialized latches start in every value") {
  auto r = oracle::brute_force_reachable(test::aag("aag 2 0 2 1 0\n2 2 2\n4 4 4\n0\n"));
  CHECK(r.reachable.count() == 4);
}

TEST_CASE("too many bits are refused") {
  AigerCircuit c = families::random_netlist(20, 6, 10, 1);
  CHECK_THROWS_AS(oracle::brute_force_reachable(c), oracle::TooLarge);
}

TEST_CASE("reachable set matches scalar simulation") {
  for (const auto& nc : families::small_corpus(80, 14, 19)) {
    CAPTURE(nc.name);
    const AigerCircuit& c = nc.circuit;
    const std::size_t L = c.latches.size(), I = c.inputs.size();
    test::Sim sim(c);
    std::vector<char> seen(std::uint64_t{1} << L, 0);
    std::vector<std::uint64_t> todo;
    bool bad = false;
    for (std::uint64_t s = 0; s < seen.size(); ++s) {
      if (sim.initial(s)) {
        seen[s] = 1;
        todo.push_back(s);
      }
    }
    while (!todo.empty()) {
      std::uint64_t s = todo.back();
      todo.pop_back();
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << I); ++y) {
        sim.eval(s, y);
        bad = bad || sim.bad();
        std::uint64_t t = sim.next_state();
        if (!seen[t]) {
          seen[t] = 1;
          todo.push_back(t);
        }
      }
    }
    auto r = oracle::brute_force_reachable(c);
    CHECK((r.verdict == OracleVerdict::Unsafe) == bad);
    for (std::uint64_t s = 0; s < seen.size(); ++s) CHECK(r.reachable.contains(s) == (seen[s] != 0));
  }
}

TEST_CASE("complement of the reachable set is an invariant of every safe circuit") {
  for (const auto& nc : families::small_corpus(80, 12, 23)) {
    CAPTURE(nc.name);
    auto r = oracle::brute_force_reachable(nc.circuit);
    if (r.verdict != OracleVerdict::Safe) continue;
    auto inv = oracle::complement_clauses(r.reachable);
    CHECK(inv.size() == r.reachable.universe_size() - r.reachable.count());
    CHECK(oracle::check_invariant(nc.circuit, inv).ok());
  }
}

TEST_CASE("check_invariant reports each failing condition") {
  const AigerCircuit c = families::counter(3, 4, 5, false);
  auto r = oracle::brute_force_reachable(c);
  auto inv = oracle::complement_clauses(r.reachable);

  // empty invariant: initiation and consecution hold, safety does not
  auto empty = oracle::check_invariant(c, {});
  CHECK(empty.initiation);
  CHECK(empty.consecution);
  CHECK_FALSE(empty.safety);

  // excluding the initial state
  std::vector<Clause> no_init = inv;
  no_init.push_back(Clause{Lit(1, false), Lit(2, false), Lit(3, false)});
  CHECK_FALSE(oracle::check_invariant(c, no_init).initiation);

  // a clause over an input or next-state variable is malformed
  auto bad_var = oracle::check_invariant(c, {Clause{Lit(7, false)}});
  CHECK_FALSE(bad_var.well_formed);
  CHECK_FALSE(bad_var.ok());
}

TEST_CASE("deleting a clause of an engine invariant never breaks initiation") {
  for (const auto& nc : families::small_corpus(50, 12, 29)) {
    CAPTURE(nc.name);
    Verdict v = check(to_transition_system(nc.circuit), test::config(Strategy::Standard));
    if (v.result != VerdictKind::Safe) continue;
    REQUIRE(oracle::check_invariant(nc.circuit, v.invariant).ok());
    for (std::size_t k = 0; k < v.invariant.size(); ++k) {
      auto fewer = v.invariant;
      fewer.erase(fewer.begin() + k);
      auto rep = oracle::check_invariant(nc.circuit, fewer);
      CHECK(rep.initiation);
    }
  }
}

TEST_CASE("dropping the only clause of the counter invariant fails") {
  // 2-bit counter 0,1,2,0 with bad = 3: the invariant is the single clause ¬(x0 ∧ x1)
  const AigerCircuit c = test::aag("aag 5 0 2 1 3\n2 8\n4 10\n6\n6 4 2\n8 5 3\n10 5 2\n");
  std::vector<Clause> inv{Clause{Lit(1, true), Lit(2, true)}};
  CHECK(oracle::check_invariant(c, inv).ok());
  CHECK_FALSE(oracle::check_invariant(c, {}).safety);
  // ¬x0 alone is not inductive, 0 steps to 1
  auto weak = oracle::check_invariant(c, {Clause{Lit(1, true)}});
  CHECK(weak.initiation);
  CHECK_FALSE(weak.consecution);
}

TEST_CASE("trace replay") {
  const AigerCircuit c = test::aag("aag 1 0 1 1 0\n2 3\n2\n");
  std::vector<TraceStep> good{{Cube{Lit(1, true)}, Cube{}}, {Cube{Lit(1, false)}, Cube{}}};
  CHECK(oracle::replay_trace(c, good).ok);

  std::vector<TraceStep> not_initial{{Cube{Lit(1, false)}, Cube{}}};
  auto r = oracle::replay_trace(c, not_initial);
  CHECK_FALSE(r.ok);
  CHECK(r.step == 0);

  std::vector<TraceStep> not_bad{{Cube{Lit(1, true)}, Cube{}}};
  CHECK_FALSE(oracle::replay_trace(c, not_bad).ok);

  std::vector<TraceStep> wrong_step{{Cube{Lit(1, true)}, Cube{}}, {Cube{Lit(1, true)}, Cube{}}};
  r = oracle::replay_trace(c, wrong_step);
  CHECK_FALSE(r.ok);
  // the offending step is the transition out of state 0
  CHECK(r.step == 0);
  CHECK(r.reason.find("transition") != std::string::npos);

  CHECK_FALSE(oracle::replay_trace(c, {}).ok);
}

TEST_CASE("flipping an input bit of an engine trace breaks the replay") {
  // x' = i, bad = x ∧ ¬i
  const AigerCircuit c = test::aag("aag 3 1 1 1 1\n2\n4 2\n6\n6 4 3\n");
  Verdict v = check(to_transition_system(c), test::config(Strategy::Standard));
  REQUIRE(v.result == VerdictKind::Unsafe);
  REQUIRE(oracle::replay_trace(c, v.trace).ok);
  REQUIRE(v.trace.size() == 2);
  for (std::size_t k = 0; k < v.trace.size(); ++k) {
    auto t = v.trace;
    std::vector<Lit> in(t[k].input.begin(), t[k].input.end());
    REQUIRE(in.size() == 1);
    in[0] = ~in[0];
    t[k].input = Cube(in);
    CHECK_FALSE(oracle::replay_trace(c, t).ok);
  }
}

TEST_CASE("single state trace of a bad initial state") {
  const AigerCircuit c = test::aag("aag 1 0 1 1 0\n2 2 0\n3\n");
  CHECK(oracle::replay_trace(c, {{Cube{Lit(1, true)}, Cube{}}}).ok);
  CHECK_FALSE(oracle::replay_trace(c, {{Cube{Lit(1, false)}, Cube{}}}).ok);
}

TEST_CASE("selected property") {
  // bad 0: x, bad 1: false
  const AigerCircuit c = test::aag("aag 1 0 1 0 0 2\n2 3\n2\n0\n");
  CHECK(oracle::brute_force_reachable(c, {0}).verdict == OracleVerdict::Unsafe);
  CHECK(oracle::brute_force_reachable(c, {1}).verdict == OracleVerdict::Safe);
  CHECK(oracle::brute_force_reachable(c).verdict == OracleVerdict::Unsafe);
  CHECK(oracle::check_invariant(c, {}, {1}).ok());
}
