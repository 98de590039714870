#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "dynpdr/bench.hpp"
#include "dynpdr/families.hpp"
#include "support.hpp"

using namespace dynpdr;
using namespace dynpdr::bench;
namespace fs = std::filesystem;

namespace {

RunRecord rec(std::string c, std::string s, RunResult r, double t, double limit = 10) {
  RunRecord x;
  x.case_name = std::move(c);
  x.strategy = std::move(s);
  x.result = r;
  x.wall_time = t;
  x.time_limit = limit;
  return x;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("dynpdr_bench_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& body) const {
    fs::path p = path / name;
    std::ofstream(p, std::ios::binary) << body;
    return p.string();
  }
};

}  // namespace

TEST_CASE("par2 examples") {
  const double L = 10;
  CHECK(par2({rec("a", "s", RunResult::Safe, 1e-9, L)}, L) == doctest::Approx(0.0));
  CHECK(par2({rec("a", "s", RunResult::Timeout, 10.5, L)}, L) == doctest::Approx(2 * L));
  CHECK(par2({rec("a", "s", RunResult::Error, 0.1, L)}, L) == doctest::Approx(2 * L));
  // one solved at L/2 and one unsolved: (0.5L + 2L) / 2
  std::vector<RunRecord> two{rec("a", "s", RunResult::Unsafe, L / 2, L), rec("b", "s", RunResult::MemOut, 3, L)};
  CHECK(par2(two, L) == doctest::Approx(1.25 * L));
  CHECK(par2_sum(two, L) == doctest::Approx(2.5 * L));
  CHECK_THROWS_AS(par2({}, L), EmptyRecordSet);
}

TEST_CASE("result names") {
  for (RunResult r : {RunResult::Safe, RunResult::Unsafe, RunResult::Timeout, RunResult::MemOut, RunResult::Error}) {
    CHECK(parse_run_result(to_string(r)) == r);
  }
  CHECK(solved(RunResult::Safe));
  CHECK_FALSE(solved(RunResult::Timeout));
}

TEST_CASE("compare computes deltas against the baseline") {
  std::vector<RunRecord> rs{
      rec("a", "standard", RunResult::Safe, 1),   rec("b", "standard", RunResult::Timeout, 10),
      rec("c", "standard", RunResult::Timeout, 10), rec("a", "dynamic", RunResult::Safe, 2),
      rec("b", "dynamic", RunResult::Unsafe, 3),  rec("c", "dynamic", RunResult::Safe, 4),
  };
  Report rep = compare(rs, "standard");
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].strategy == "standard");
  CHECK(rep.rows[0].solved == 1);
  CHECK(rep.rows[0].delta == 0);
  CHECK(rep.rows[0].par2_sum == doctest::Approx(41));
  CHECK(rep.rows[1].solved == 3);
  CHECK(rep.rows[1].delta == 2);
  CHECK(rep.rows[1].par2 == doctest::Approx(3));
  CHECK(rep.table.find("+2") != std::string::npos);
  CHECK(rep.cactus_csv == "strategy,solved,time\nstandard,1,1.000000\ndynamic,1,2.000000\ndynamic,2,3.000000\n"
                          "dynamic,3,4.000000\n");
  CHECK(rep.scatter_csv == "case,standard,dynamic\na,1.000000,2.000000\nb,20.000000,3.000000\n"
                           "c,20.000000,4.000000\n");
  // baseline as second strategy flips the sign
  CHECK(compare(rs, "dynamic").rows[0].delta == -2);
}

TEST_CASE("identical record sets lie on the diagonal") {
  std::vector<RunRecord> rs;
  for (std::string s : {"x", "y"}) {
    rs.push_back(rec("a", s, RunResult::Safe, 1.5));
    rs.push_back(rec("b", s, RunResult::Timeout, 10));
  }
  Report rep = compare(rs, "x");
  CHECK(rep.rows[0].par2 == rep.rows[1].par2);
  CHECK(rep.rows[1].delta == 0);
  std::istringstream is(rep.scatter_csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    auto a = line.find(','), b = line.rfind(',');
    CHECK(line.substr(a + 1, b - a - 1) == line.substr(b + 1));
  }
}

TEST_CASE("mismatched case sets are refused") {
  std::vector<RunRecord> rs{rec("a", "x", RunResult::Safe, 1), rec("b", "y", RunResult::Safe, 1)};
  CHECK_THROWS_AS(compare(rs, "x"), MismatchedCaseSets);
  rs = {rec("a", "x", RunResult::Safe, 1), rec("a", "x", RunResult::Safe, 1), rec("a", "y", RunResult::Safe, 1)};
  CHECK_THROWS_AS(compare(rs, "x"), MismatchedCaseSets);
  rs = {rec("a", "x", RunResult::Safe, 1, 10), rec("a", "y", RunResult::Safe, 1, 20)};
  CHECK_THROWS_AS(compare(rs, "x"), MismatchedCaseSets);
  CHECK_THROWS_AS(compare({rec("a", "x", RunResult::Safe, 1)}, "z"), std::invalid_argument);
  CHECK_THROWS_AS(compare({}, "x"), EmptyRecordSet);
}

TEST_CASE("compare is deterministic") {
  std::vector<RunRecord> rs;
  for (int i = 0; i < 20; ++i) {
    for (std::string s : {"p", "q", "r"}) {
      rs.push_back(rec("case" + std::to_string(i), s, i % 3 ? RunResult::Safe : RunResult::Timeout, 0.37 * i + s.size()));
    }
  }
  Report a = compare(rs, "q"), b = compare(rs, "q");
  CHECK(a.table == b.table);
  CHECK(a.cactus_csv == b.cactus_csv);
  CHECK(a.scatter_csv == b.scatter_csv);
}

TEST_CASE("csv round trip") {
  std::vector<RunRecord> rs{rec("a.aag", "ctg", RunResult::Safe, 0.25), rec("b,c", "exctg", RunResult::Error, 1)};
  rs[0].config = "ctg(lv=1,max=3)";
  rs[0].queries = 123;
  rs[0].lemmas = 7;
  rs[1].note = "said \"no\", twice";
  std::stringstream ss;
  write_csv(ss, rs);
  auto back = read_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].case_name == rs[i].case_name);
    CHECK(back[i].strategy == rs[i].strategy);
    CHECK(back[i].config == rs[i].config);
    CHECK(back[i].result == rs[i].result);
    CHECK(back[i].wall_time == doctest::Approx(rs[i].wall_time));
    CHECK(back[i].queries == rs[i].queries);
    CHECK(back[i].lemmas == rs[i].lemmas);
    CHECK(back[i].time_limit == rs[i].time_limit);
    CHECK(back[i].note == rs[i].note);
  }
  std::istringstream bad_header("case,strategy\n");
  CHECK_THROWS(read_csv(bad_header));
  std::istringstream negative("case,strategy,config,result,wall_time,queries,lemmas,time_limit,note\n"
                              "a,s,c,safe,-1,0,0,10,\n");
  CHECK_THROWS(read_csv(negative));
}

TEST_CASE("single runs classify and certify") {
  TempDir dir;
  const std::string toggle = dir.write("toggle.aag", "aag 1 0 1 1 0\n2 3\n2\n");
  const std::string broken = dir.write("broken.aag", "aag 1 0 1 1 0\n2 3\n");
  const std::string hard = dir.write("hard.aag", write_aag(families::ladder(8, 4, 177, true)));
  RunLimits lim;
  lim.time_limit = 5;

  RunRecord r = run_single(toggle, "standard", test::config(Strategy::Standard), lim);
  CHECK(r.result == RunResult::Unsafe);
  CHECK(r.case_name == "toggle.aag");
  CHECK(r.time_limit == 5);
  CHECK(r.queries > 0);

  RunRecord e = run_single(broken, "standard", test::config(Strategy::Standard), lim);
  CHECK(e.result == RunResult::Error);
  CHECK_FALSE(e.note.empty());

  lim.time_limit = 0.001;
  RunRecord t = run_single(hard, "standard", test::config(Strategy::Standard), lim);
  CHECK(t.result == RunResult::Timeout);
  CHECK(t.note == "time limit reached");
}

TEST_CASE("isolated runs") {
  TempDir dir;
  const std::string safe = dir.write("count.aag", write_aag(families::counter(3, 4, 5, false)));
  const std::string hard = dir.write("hard.aag", write_aag(families::ladder(8, 4, 177, true)));
  RunLimits lim;
  lim.time_limit = 5;
  RunRecord r = run_isolated(safe, "dynamic", test::config(Strategy::Dynamic), lim);
  CHECK(r.result == RunResult::Safe);
  CHECK(r.strategy == "dynamic");

  lim.time_limit = 0.2;
  std::vector<BenchJob> jobs{{hard, "standard", test::config(Strategy::Standard)},
                             {safe, "standard", test::config(Strategy::Standard)}};
  auto out = run_all(jobs, lim, 2);
  REQUIRE(out.size() == 2);
  CHECK(out[0].result == RunResult::Timeout);
  CHECK(out[1].result == RunResult::Safe);
  CHECK(out[1].case_name == "count.aag");
}
