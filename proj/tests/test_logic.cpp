#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "dynpdr/families.hpp"
#include "dynpdr/sat.hpp"
#include "support.hpp"

using namespace dynpdr;

namespace {

std::set<std::vector<Lit>> clause_set(const CnfFormula& f) {
  std::set<std::vector<Lit>> out;
  for (auto cl : f.clauses) {
    std::sort(cl.begin(), cl.end());
    out.insert(cl);
  }
  return out;
}

Lit x(Var v, bool neg = false) { return Lit(v, neg); }

}  // namespace

TEST_CASE("literal packing") {
  Lit l(5, true);
  CHECK(l.var() == 5);
  CHECK(l.negated());
  CHECK(~~l == l);
  CHECK((l ^ true) == ~l);
  CHECK((l ^ false) == l);
  CHECK(to_string(l) == "-5");
  CHECK(kFalse.var() == 0);
  CHECK(~kFalse == kTrue);
}

TEST_CASE("literal sets are sorted and duplicate free") {
  Cube c{x(3), x(1, true), x(3), x(2)};
  REQUIRE(c.size() == 3);
  CHECK(c[0] == x(1, true));
  CHECK(c[1] == x(2));
  CHECK(c[2] == x(3));
  CHECK(c.contains(x(2)));
  CHECK_FALSE(c.contains(x(2, true)));
  CHECK(c.without(x(2)) == Cube{x(1, true), x(3)});
  CHECK(c.without(x(7)) == c);
  CHECK(c.intersect(Cube{x(3), x(2, true)}) == Cube{x(3)});
  CHECK_THROWS_AS((Cube{x(1), x(1, true)}), LogicError);
  CHECK(to_string(c) == "[-1 2 3]");
}

TEST_CASE("negation is an involution") {
  std::mt19937_64 rng(1);
  for (int n = 0; n < 200; ++n) {
    std::vector<Lit> lits;
    for (Var v = 1; v <= 8; ++v) {
      if (rng() % 2) lits.push_back(Lit(v, rng() % 2));
    }
    Cube c(lits);
    Clause cl = negate(c);
    CHECK(negate(cl) == c);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(cl[i] == ~c[i]);
  }
}

TEST_CASE("subsumption examples") {
  CHECK(subsumes(Cube{x(1)}, Cube{x(1), x(2, true)}));
  CHECK_FALSE(subsumes(Cube{x(1)}, Cube{x(1, true)}));
  CHECK(subsumes(Cube{}, Cube{x(4)}));
  CHECK(subsumes(Clause{x(2)}, Clause{x(2)}));
}

TEST_CASE("subsumption agrees with brute force set inclusion") {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 2000; ++n) {
    std::vector<Lit> a, b;
    for (Var v = 1; v <= 5; ++v) {
      auto r = rng() % 3;
      if (r) a.push_back(Lit(v, r == 2));
      r = rng() % 3;
      if (r) b.push_back(Lit(v, r == 2));
    }
    bool inc = true;
    for (Lit l : a) {
      bool found = false;
      for (Lit m : b) found = found || m == l;
      inc = inc && found;
    }
    CHECK(subsumes(Cube(a), Cube(b)) == inc);
    CHECK(subsumes(Clause(a), Clause(b)) == inc);
  }
}

TEST_CASE("priming") {
  TransitionSystem ts(3, 2);
  CHECK(prime(ts, Cube{}).empty());
  Cube c{Lit(ts.state_var(0), false), Lit(ts.state_var(1), true)};
  Cube p = prime(ts, c);
  CHECK(p == Cube{Lit(ts.next_var(0), false), Lit(ts.next_var(1), true)});
  CHECK(unprime(ts, p) == c);
  CHECK(prime(ts, unprime(ts, p)) == p);
  CHECK_THROWS_AS(prime(ts, Cube{Lit(ts.input_var(0), false)}), LogicError);
  CHECK_THROWS_AS(unprime(ts, c), LogicError);
}

TEST_CASE("variable layout") {
  TransitionSystem ts(3, 2);
  CHECK(ts.state_var(0) == 1);
  CHECK(ts.input_var(0) == 4);
  CHECK(ts.next_var(0) == 6);
  CHECK(ts.num_vars() == 9);
  CHECK(ts.latch_of(ts.next_var(2)) == 2);
  CHECK(ts.latch_of(ts.state_var(1)) == 1);
}

TEST_CASE("intersects_initial examples") {
  TransitionSystem ts(2, 0);
  ts.set_init(Cube{x(1, true), x(2, true)});
  CHECK_FALSE(intersects_initial(ts, Cube{x(1)}));
  CHECK(intersects_initial(ts, Cube{x(2, true)}));

  TransitionSystem partial(2, 0);
  partial.set_init(Cube{x(1, true)});
  CHECK(intersects_initial(partial, Cube{x(2)}));
}

TEST_CASE("intersects_initial agrees with enumeration of initial states") {
  for (const auto& nc : families::small_corpus(40, 16, 5)) {
    TransitionSystem ts = to_transition_system(nc.circuit);
    test::Sim sim(nc.circuit);
    const std::size_t L = ts.num_latches();
    std::mt19937_64 rng(L);
    for (int n = 0; n < 30; ++n) {
      std::vector<Lit> lits;
      for (std::size_t i = 0; i < L; ++i) {
        auto r = rng() % 3;
        if (r) lits.push_back(Lit(ts.state_var(i), r == 2));
      }
      Cube c(lits);
      bool any = false;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << L) && !any; ++s) {
        any = sim.initial(s) && test::cube_holds(c, s);
      }
      CHECK(intersects_initial(ts, c) == any);
    }
  }
}

TEST_CASE("encoding of a latch that keeps its value") {
  TransitionSystem ts = to_transition_system(test::aag("aag 1 0 1 1 0\n2 2\n2\n"));
  Var x0 = ts.state_var(0), x0n = ts.next_var(0);
  std::set<std::vector<Lit>> want{{Lit(x0, true), Lit(x0n, false)}, {Lit(x0, false), Lit(x0n, true)}};
  CHECK(clause_set(encode_transition(ts)) == want);
}

TEST_CASE("encoding of the toggle") {
  TransitionSystem ts = to_transition_system(test::aag("aag 1 0 1 1 0\n2 3\n2\n"));
  Var x0 = ts.state_var(0), x0n = ts.next_var(0);
  std::set<std::vector<Lit>> want{{Lit(x0, false), Lit(x0n, false)}, {Lit(x0, true), Lit(x0n, true)}};
  CHECK(clause_set(encode_transition(ts)) == want);
}

TEST_CASE("encoding has three clauses per gate and two per latch") {
  AigerCircuit c = test::aag("aag 5 2 1 1 2\n2\n4\n6 10\n10\n8 6 2\n10 9 4\n");
  TransitionSystem ts = to_transition_system(c);
  CHECK(encode_transition(ts).clauses.size() == 3 * 2 + 2 * 1);
}

TEST_CASE("encoding models are exactly the simulated transitions") {
  for (const auto& nc : families::small_corpus(60, 10, 9)) {
    CAPTURE(nc.name);
    const AigerCircuit& c = nc.circuit;
    TransitionSystem ts = to_transition_system(c);
    CnfFormula cnf = encode_transition(ts);
    const std::size_t L = ts.num_latches(), I = ts.num_inputs();
    test::Sim sim(c);
    sat::CdclSolver solver;
    solver.reserve_var(cnf.num_vars);
    for (const auto& cl : cnf.clauses) solver.add_clause(cl);

    std::uint64_t models = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << L); ++s) {
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << I); ++y) {
        sim.eval(s, y);
        const std::uint64_t expect = sim.next_state();
        for (std::uint64_t t = 0; t < (std::uint64_t{1} << L); ++t) {
          std::vector<Lit> assume;
          for (std::size_t i = 0; i < L; ++i) {
            assume.push_back(Lit(ts.state_var(i), !((s >> i) & 1)));
            assume.push_back(Lit(ts.next_var(i), !((t >> i) & 1)));
          }
          for (std::size_t j = 0; j < I; ++j) assume.push_back(Lit(ts.input_var(j), !((y >> j) & 1)));
          bool sat = solver.solve(assume) == sat::Result::Sat;
          CHECK(sat == (t == expect));
          models += sat;
        }
      }
    }
    CHECK(models == (std::uint64_t{1} << (L + I)));
  }
}

TEST_CASE("dimacs output") {
  TransitionSystem ts = to_transition_system(test::aag("aag 1 0 1 1 0\n2 3\n2\n"));
  std::ostringstream os;
  write_dimacs(os, encode_transition(ts));
  CHECK(os.str().rfind("p cnf 3 2\n", 0) == 0);
  CHECK(os.str().find("2 3 0\n") != std::string::npos);
  CHECK(os.str().find("-2 -3 0\n") != std::string::npos);
}
