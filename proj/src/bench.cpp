#include "dynpdr/bench.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "dynpdr/aiger.hpp"
#include "dynpdr/oracle.hpp"

namespace dynpdr::bench {

const char* to_string(RunResult r) {
  switch (r) {
    case RunResult::Safe: return "safe";
    case RunResult::Unsafe: return "unsafe";
    case RunResult::Timeout: return "timeout";
    case RunResult::MemOut: return "memout";
    case RunResult::Error: return "error";
  }
  return "?";
}

RunResult parse_run_result(const std::string& s) {
  for (RunResult r : {RunResult::Safe, RunResult::Unsafe, RunResult::Timeout, RunResult::MemOut, RunResult::Error}) {
    if (s == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown run result '" + s + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string case_name_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

RunRecord run_single(const std::string& path, const std::string& label, const StrategyConfig& cfg,
                     const RunLimits& limits, std::uint64_t seed) {
  RunRecord rec;
  rec.case_name = case_name_of(path);
  rec.strategy = label;
  rec.config = cfg.summary();
  rec.time_limit = limits.time_limit;
  const auto start = Clock::now();
  try {
    AigerCircuit circuit = read_aiger_file(path);
    TransitionSystem ts = to_transition_system(circuit);
    EngineOptions opts;
    opts.seed = seed;
    opts.time_limit = std::chrono::duration<double>(limits.time_limit);
    Verdict v = check(ts, cfg, opts);
    rec.wall_time = seconds_since(start);
    rec.queries = v.stats.sat_queries + v.stats.unsat_queries;
    rec.lemmas = v.stats.final_lemmas;
    switch (v.result) {
      case VerdictKind::Unknown:
        rec.result = v.reason == "out of memory"       ? RunResult::MemOut
                     : v.reason == "time limit reached" ? RunResult::Timeout
                                                        : RunResult::Error;
        rec.note = v.reason;
        break;
      case VerdictKind::Safe:
        if (oracle::check_invariant(circuit, v.invariant).ok()) {
          rec.result = RunResult::Safe;
        } else {
          rec.result = RunResult::Error;
          rec.note = "invariant failed certification";
        }
        break;
      case VerdictKind::Unsafe: {
        auto rep = oracle::replay_trace(circuit, v.trace);
        if (rep.ok) {
          rec.result = RunResult::Unsafe;
        } else {
          rec.result = RunResult::Error;
          rec.note = "trace failed replay: " + rep.reason;
        }
        break;
      }
    }
    if (solved(rec.result) && rec.wall_time > limits.time_limit) {
      rec.result = RunResult::Timeout;
      rec.note = "verdict arrived after the limit";
    }
  } catch (const std::bad_alloc&) {
    rec.wall_time = seconds_since(start);
    rec.result = RunResult::MemOut;
    rec.note = "out of memory";
  } catch (const std::exception& e) {
    rec.wall_time = seconds_since(start);
    rec.result = RunResult::Error;
    rec.note = e.what();
  }
  return rec;
}

namespace {

struct Child {
  pid_t pid = -1;
  int fd = -1;
  std::size_t job = 0;
  Clock::time_point start;
  std::string out;
};

RunRecord failed(const BenchJob& job, const RunLimits& limits, RunResult r, double wall, std::string note) {
  RunRecord rec;
  rec.case_name = case_name_of(job.path);
  rec.strategy = job.label;
  rec.config = job.cfg.summary();
  rec.result = r;
  rec.wall_time = wall;
  rec.time_limit = limits.time_limit;
  rec.note = std::move(note);
  return rec;
}

Child spawn(const BenchJob& job, std::size_t idx, const RunLimits& limits, std::uint64_t seed) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  std::fflush(nullptr);
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    close(fds[0]);
    rlimit rl;
    rl.rlim_cur = rl.rlim_max = static_cast<rlim_t>(limits.memory_mb) * 1024 * 1024;
    setrlimit(RLIMIT_AS, &rl);
    RunRecord rec = run_single(job.path, job.label, job.cfg, limits, seed);
    std::ostringstream os;
    write_csv(os, {rec});
    const std::string s = os.str();
    std::size_t off = 0;
    while (off < s.size()) {
      ssize_t n = write(fds[1], s.data() + off, s.size() - off);
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
    close(fds[1]);
    _exit(0);
  }
  close(fds[1]);
  Child c;
  c.pid = pid;
  c.fd = fds[0];
  c.job = idx;
  c.start = Clock::now();
  return c;
}

RunRecord reap(Child& c, const BenchJob& job, const RunLimits& limits) {
  int status = 0;
  waitpid(c.pid, &status, 0);
  close(c.fd);
  const double wall = seconds_since(c.start);
  if (WIFSIGNALED(status)) {
    return failed(job, limits, RunResult::Error, wall, "child killed by signal " + std::to_string(WTERMSIG(status)));
  }
  std::istringstream is(c.out);
  try {
    auto recs = read_csv(is);
    if (recs.size() == 1) return recs.front();
  } catch (const std::exception&) {
  }
  return failed(job, limits, RunResult::Error, wall, "child produced no record");
}

}  // namespace

std::vector<RunRecord> run_all(const std::vector<BenchJob>& work, const RunLimits& limits, unsigned jobs,
                               std::uint64_t seed) {
  std::vector<RunRecord> out(work.size());
  std::vector<Child> running;
  std::size_t next = 0;
  const double grace = 2.0;
  jobs = std::max(1u, jobs);
  while (next < work.size() || !running.empty()) {
    while (next < work.size() && running.size() < jobs) {
      running.push_back(spawn(work[next], next, limits, seed));
      ++next;
    }
    std::vector<pollfd> pfds;
    double wait = 1e9;
    for (const Child& c : running) {
      pfds.push_back({c.fd, POLLIN, 0});
      wait = std::min(wait, limits.time_limit + grace - seconds_since(c.start));
    }
    const int timeout_ms = static_cast<int>(std::clamp(wait * 1000.0, 0.0, 1000.0));
    int n = poll(pfds.data(), pfds.size(), timeout_ms);
    if (n < 0 && errno != EINTR) throw std::runtime_error("poll failed");
    for (std::size_t k = running.size(); k-- > 0;) {
      Child& c = running[k];
      bool done = false;
      if (n > 0 && (pfds[k].revents & (POLLIN | POLLHUP | POLLERR))) {
        char buf[4096];
        ssize_t got = read(c.fd, buf, sizeof buf);
        if (got > 0) {
          c.out.append(buf, static_cast<std::size_t>(got));
        } else {
          out[c.job] = reap(c, work[c.job], limits);
          done = true;
        }
      }
      if (!done && seconds_since(c.start) > limits.time_limit + grace) {
        kill(c.pid, SIGKILL);
        waitpid(c.pid, nullptr, 0);
        close(c.fd);
        out[c.job] = failed(work[c.job], limits, RunResult::Timeout, limits.time_limit, "killed at the hard limit");
        done = true;
      }
      if (done) running.erase(running.begin() + static_cast<std::ptrdiff_t>(k));
    }
  }
  return out;
}

RunRecord run_isolated(const std::string& path, const std::string& label, const StrategyConfig& cfg,
                       const RunLimits& limits, std::uint64_t seed) {
  return run_all({{path, label, cfg}}, limits, 1, seed).front();
}

double par2_sum(const std::vector<RunRecord>& records, double time_limit) {
  if (records.empty()) throw EmptyRecordSet();
  double sum = 0;
  for (const RunRecord& r : records) sum += solved(r.result) ? r.wall_time : 2.0 * time_limit;
  return sum;
}

double par2(const std::vector<RunRecord>& records, double time_limit) {
  return par2_sum(records, time_limit) / static_cast<double>(records.size());
}

namespace {

std::string fmt(double x, int prec) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << x;
  return os.str();
}

}  // namespace

Report compare(const std::vector<RunRecord>& records, const std::string& baseline) {
  if (records.empty()) throw EmptyRecordSet();
  std::vector<std::string> order;
  std::map<std::string, std::vector<RunRecord>> by;
  for (const RunRecord& r : records) {
    if (!by.count(r.strategy)) order.push_back(r.strategy);
    by[r.strategy].push_back(r);
  }
  if (!by.count(baseline)) throw std::invalid_argument("baseline '" + baseline + "' has no records");

  const double limit = records.front().time_limit;
  for (const RunRecord& r : records) {
    if (r.time_limit != limit) throw MismatchedCaseSets("records use different time limits");
  }
  std::set<std::string> cases;
  for (const RunRecord& r : by[baseline]) cases.insert(r.case_name);
  for (const auto& [name, recs] : by) {
    std::set<std::string> mine;
    for (const RunRecord& r : recs) {
      if (!mine.insert(r.case_name).second) throw MismatchedCaseSets("case " + r.case_name + " repeated for " + name);
    }
    if (mine != cases) throw MismatchedCaseSets("strategy " + name + " covers a different case set than " + baseline);
  }

  Report rep;
  std::size_t base_solved = 0;
  for (const RunRecord& r : by[baseline]) base_solved += solved(r.result);
  std::ostringstream table;
  table << std::left << std::setw(16) << "strategy" << std::right << std::setw(8) << "solved" << std::setw(8) << "delta"
        << std::setw(12) << "par2" << std::setw(14) << "par2_sum" << '\n';
  for (const std::string& name : order) {
    const auto& recs = by[name];
    StrategyRow row;
    row.strategy = name;
    for (const RunRecord& r : recs) row.solved += solved(r.result);
    row.delta = static_cast<long>(row.solved) - static_cast<long>(base_solved);
    row.par2 = par2(recs, limit);
    row.par2_sum = par2_sum(recs, limit);
    table << std::left << std::setw(16) << name << std::right << std::setw(8) << row.solved << std::setw(8)
          << ((row.delta >= 0 ? "+" : "") + std::to_string(row.delta)) << std::setw(12) << fmt(row.par2, 2)
          << std::setw(14) << fmt(row.par2_sum, 2) << '\n';
    rep.rows.push_back(row);
  }
  rep.table = table.str();

  std::ostringstream cactus;
  cactus << "strategy,solved,time\n";
  for (const std::string& name : order) {
    std::vector<double> times;
    for (const RunRecord& r : by[name]) {
      if (solved(r.result)) times.push_back(r.wall_time);
    }
    std::sort(times.begin(), times.end());
    for (std::size_t i = 0; i < times.size(); ++i) cactus << name << ',' << i + 1 << ',' << fmt(times[i], 6) << '\n';
  }
  rep.cactus_csv = cactus.str();

  std::ostringstream scatter;
  scatter << "case";
  for (const std::string& name : order) scatter << ',' << name;
  scatter << '\n';
  std::map<std::string, std::map<std::string, double>> penalized;
  for (const RunRecord& r : records) penalized[r.case_name][r.strategy] = solved(r.result) ? r.wall_time : 2.0 * limit;
  for (const auto& [c, row] : penalized) {
    scatter << c;
    for (const std::string& name : order) scatter << ',' << fmt(row.at(name), 6);
    scatter << '\n';
  }
  rep.scatter_csv = scatter.str();
  return rep;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + '"';
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (in_quotes) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        in_quotes = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

constexpr const char* kHeader = "case,strategy,config,result,wall_time,queries,lemmas,time_limit,note";

}  // namespace

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kHeader << '\n';
  for (const RunRecord& r : records) {
    os << quote(r.case_name) << ',' << quote(r.strategy) << ',' << quote(r.config) << ',' << to_string(r.result) << ','
       << fmt(r.wall_time, 6) << ',' << r.queries << ',' << r.lemmas << ',' << fmt(r.time_limit, 3) << ','
       << quote(r.note) << '\n';
  }
}

std::vector<RunRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) throw std::invalid_argument("not a results CSV (bad header)");
  std::vector<RunRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_row(line);
    if (f.size() != 9) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 9 fields");
    RunRecord r;
    r.case_name = f[0];
    r.strategy = f[1];
    r.config = f[2];
    r.result = parse_run_result(f[3]);
    r.wall_time = std::stod(f[4]);
    r.queries = std::stoull(f[5]);
    r.lemmas = std::stoull(f[6]);
    r.time_limit = std::stod(f[7]);
    r.note = f[8];
    if (r.wall_time < 0) throw std::invalid_argument("line " + std::to_string(lineno) + ": negative wall time");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dynpdr::bench
