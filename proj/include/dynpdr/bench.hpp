#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynpdr/engine.hpp"
#include "dynpdr/generalize.hpp"

namespace dynpdr::bench {

enum class RunResult { Safe, Unsafe, Timeout, MemOut, Error };

const char* to_string(RunResult r);
RunResult parse_run_result(const std::string& s);
inline bool solved(RunResult r) { return r == RunResult::Safe || r == RunResult::Unsafe; }

struct RunLimits {
  double time_limit = 60.0;            // seconds, wall clock
  std::size_t memory_mb = 2048;
};

struct RunRecord {
  std::string case_name;
  std::string strategy;   // label used for grouping, e.g. "dynamic"
  std::string config;     // StrategyConfig::summary()
  RunResult result = RunResult::Error;
  double wall_time = 0;
  std::uint64_t queries = 0;
  std::uint64_t lemmas = 0;
  double time_limit = 0;
  std::string note;
};

class EmptyRecordSet : public std::invalid_argument {
 public:
  EmptyRecordSet() : std::invalid_argument("no records") {}
};

class MismatchedCaseSets : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Runs the engine in this process under the time limit and certifies the
// verdict; never throws for per-case problems.
RunRecord run_single(const std::string& path, const std::string& label, const StrategyConfig& cfg,
                     const RunLimits& limits, std::uint64_t seed = 0);

// As run_single, but in a forked child with an address-space limit and a
// hard kill shortly after the time limit.
RunRecord run_isolated(const std::string& path, const std::string& label, const StrategyConfig& cfg,
                       const RunLimits& limits, std::uint64_t seed = 0);

struct BenchJob {
  std::string path;
  std::string label;
  StrategyConfig cfg;
};

// Runs every job in its own child, at most `jobs` at a time. Records come
// back in job order.
std::vector<RunRecord> run_all(const std::vector<BenchJob>& work, const RunLimits& limits, unsigned jobs,
                               std::uint64_t seed = 0);

// Mean over cases of the wall time if solved, else twice the limit.
double par2(const std::vector<RunRecord>& records, double time_limit);
double par2_sum(const std::vector<RunRecord>& records, double time_limit);

struct StrategyRow {
  std::string strategy;
  std::size_t solved = 0;
  long delta = 0;
  double par2 = 0;
  double par2_sum = 0;
};

struct Report {
  std::vector<StrategyRow> rows;
  std::string table;
  std::string cactus_csv;
  std::string scatter_csv;
};

// Groups records by strategy. Every strategy must cover the same cases.
Report compare(const std::vector<RunRecord>& records, const std::string& baseline);

void write_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(std::istream& is);

}  // namespace dynpdr::bench
