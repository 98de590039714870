#include "dynpdr/sat.hpp"

#include <algorithm>
#include <cmath>

namespace dynpdr::sat {

namespace {

enum class SearchResult { Sat, Unsat, Restart, Timeout };

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

CdclSolver::CdclSolver(std::uint64_t seed) : seed_(seed), rng_(seed) {}

Var CdclSolver::new_var() {
  Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(kNoRef);
  double act = 0.0;
  std::uint8_t pol = 1;
  if (seed_ != 0) {
    act = std::uniform_real_distribution<double>(0.0, 1e-5)(rng_);
    pol = static_cast<std::uint8_t>(rng_() & 1u);
  }
  polarity_.push_back(pol);
  activity_.push_back(act);
  watches_.emplace_back();
  watches_.emplace_back();
  seen_.push_back(0);
  model_.push_back(false);
  heap_index_.push_back(-1);
  heap_insert(v);
  return v;
}

void CdclSolver::add_clause(std::span<const Lit> in) {
  if (!ok_) return;
  std::vector<Lit> lits(in.begin(), in.end());
  for (Lit l : lits) reserve_var(l.var());
  std::sort(lits.begin(), lits.end());
  std::size_t j = 0;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    Lit l = lits[i];
    if (value(l) == kTrue) return;
    if (i + 1 < lits.size() && lits[i + 1] == ~l) return;  // tautology
    if (value(l) == kFalse) continue;
    if (j > 0 && lits[j - 1] == l) continue;
    lits[j++] = l;
  }
  lits.resize(j);
  if (lits.empty()) {
    ok_ = false;
    return;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], kNoRef);
    ok_ = propagate() == kNoRef;
    return;
  }
  CRef c = alloc_clause(lits, false);
  clauses_.push_back(c);
  ++num_original_;
  attach(c);
}

CdclSolver::CRef CdclSolver::alloc_clause(std::span<const Lit> lits, bool learnt) {
  CRef c = static_cast<CRef>(arena_.size());
  arena_.push_back(Lit::from_code(static_cast<std::uint32_t>(lits.size()) << 2 |
                                  (learnt ? 2u : 0u)));
  arena_.push_back(Lit::from_code(std::bit_cast<std::uint32_t>(0.0f)));
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  return c;
}

void CdclSolver::attach(CRef c) {
  const Lit* lits = clause_lits(c);
  watches_[(~lits[0]).code()].push_back({c, lits[1]});
  watches_[(~lits[1]).code()].push_back({c, lits[0]});
}

bool CdclSolver::locked(CRef c) const {
  Lit first = clause_lits(c)[0];
  return reason_[first.var()] == c && value(first) == kTrue;
}

void CdclSolver::remove_clause(CRef c) {
  if (locked(c)) reason_[clause_lits(c)[0].var()] = kNoRef;
  arena_[c] = Lit::from_code(header(c) | 1u);
  wasted_ += clause_size(c) + 2;
  if (!clause_learnt(c)) --num_original_;
}

bool CdclSolver::satisfied(CRef c) const {
  const Lit* lits = clause_lits(c);
  for (std::uint32_t i = 0; i < clause_size(c); ++i) {
    if (value(lits[i]) == kTrue) return true;
  }
  return false;
}

void CdclSolver::enqueue(Lit p, CRef from) {
  Var v = p.var();
  assigns_[v] = p.negated() ? kFalse : kTrue;
  level_[v] = decision_level();
  reason_[v] = from;
  trail_.push_back(p);
}

CdclSolver::CRef CdclSolver::propagate() {
  CRef confl = kNoRef;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    std::vector<Watcher>& ws = watches_[p.code()];
    ++stats_.propagations;
    Lit false_lit = ~p;
    std::size_t i = 0, j = 0, n = ws.size();
    while (i < n) {
      Watcher w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      CRef cr = w.cref;
      if (clause_deleted(cr)) {
        ++i;
        continue;
      }
      Lit* c = clause_lits(cr);
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ++i;
      Lit first = c[0];
      Watcher nw{cr, first};
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = nw;
        continue;
      }
      bool moved = false;
      std::uint32_t size = clause_size(cr);
      for (std::uint32_t k = 2; k < size; ++k) {
        if (value(c[k]) != kFalse) {
          c[1] = c[k];
          c[k] = false_lit;
          watches_[(~c[1]).code()].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (value(first) == kFalse) {
        confl = cr;
        qhead_ = trail_.size();
        while (i < n) ws[j++] = ws[i++];
      } else {
        enqueue(first, cr);
      }
    }
    ws.resize(j);
    if (confl != kNoRef) break;
  }
  return confl;
}

void CdclSolver::analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel) {
  int path_count = 0;
  bool first = true;
  Lit p;
  out_learnt.clear();
  out_learnt.push_back(Lit());
  std::size_t index = trail_.size();

  do {
    if (clause_learnt(confl)) clause_bump(confl);
    const Lit* c = clause_lits(confl);
    std::uint32_t size = clause_size(confl);
    for (std::uint32_t j = first ? 0 : 1; j < size; ++j) {
      Lit q = c[j];
      Var v = q.var();
      if (!seen_[v] && level_[v] > 0) {
        var_bump(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path_count;
        } else {
          out_learnt.push_back(q);
        }
      }
    }
    first = false;
    do {
      --index;
    } while (!seen_[trail_[index].var()]);
    p = trail_[index];
    confl = reason_[p.var()];
    seen_[p.var()] = 0;
    --path_count;
  } while (path_count > 0);
  out_learnt[0] = ~p;

  analyze_toclear_.assign(out_learnt.begin(), out_learnt.end());
  std::uint32_t abstract = 0;
  for (std::size_t i = 1; i < out_learnt.size(); ++i) abstract |= abstract_level(out_learnt[i].var());
  std::size_t keep = 1;
  for (std::size_t i = 1; i < out_learnt.size(); ++i) {
    Var v = out_learnt[i].var();
    if (reason_[v] == kNoRef || !lit_redundant(out_learnt[i], abstract)) {
      out_learnt[keep++] = out_learnt[i];
    }
  }
  out_learnt.resize(keep);

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < out_learnt.size(); ++i) {
      if (level_[out_learnt[i].var()] > level_[out_learnt[max_i].var()]) max_i = i;
    }
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level_[out_learnt[1].var()];
  }
  for (Lit l : analyze_toclear_) seen_[l.var()] = 0;
}

bool CdclSolver::lit_redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    CRef cr = reason_[q.var()];
    const Lit* c = clause_lits(cr);
    std::uint32_t size = clause_size(cr);
    for (std::uint32_t i = 1; i < size; ++i) {
      Lit l = c[i];
      Var v = l.var();
      if (seen_[v] || level_[v] == 0) continue;
      if (reason_[v] != kNoRef && (abstract_level(v) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(l);
        analyze_toclear_.push_back(l);
      } else {
        for (std::size_t j = top; j < analyze_toclear_.size(); ++j) {
          seen_[analyze_toclear_[j].var()] = 0;
        }
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void CdclSolver::cancel_until(int level) {
  if (decision_level() <= level) return;
  for (std::size_t c = trail_.size(); c-- > static_cast<std::size_t>(trail_lim_[level]);) {
    Var v = trail_[c].var();
    assigns_[v] = kUndef;
    reason_[v] = kNoRef;
    polarity_[v] = trail_[c].negated() ? 1 : 0;
    heap_insert(v);
  }
  qhead_ = static_cast<std::size_t>(trail_lim_[level]);
  trail_.resize(qhead_);
  trail_lim_.resize(level);
}

Lit CdclSolver::pick_branch() {
  Var next = 0;
  bool found = false;
  if (seed_ != 0 && !heap_.empty() && (rng_() % 100) < 2) {
    Var v = heap_[rng_() % heap_.size()];
    if (assigns_[v] == kUndef) {
      next = v;
      found = true;
    }
  }
  while (!found) {
    if (heap_.empty()) return Lit::from_code(0xffffffffu);
    Var v = heap_pop();
    if (assigns_[v] == kUndef) {
      next = v;
      found = true;
    }
  }
  return Lit(next, polarity_[next] != 0);
}

void CdclSolver::reduce_db() {
  std::vector<CRef> sorted = learnts_;
  std::sort(sorted.begin(), sorted.end(), [this](CRef a, CRef b) {
    bool abin = clause_size(a) == 2, bbin = clause_size(b) == 2;
    if (abin != bbin) return bbin;
    float aa = clause_activity(a), ba = clause_activity(b);
    if (aa != ba) return aa < ba;
    return a < b;
  });
  double extra_lim = cla_inc_ / static_cast<double>(std::max<std::size_t>(sorted.size(), 1));
  learnts_.clear();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    CRef c = sorted[i];
    if (clause_size(c) > 2 && !locked(c) &&
        (i < sorted.size() / 2 || clause_activity(c) < extra_lim)) {
      remove_clause(c);
    } else {
      learnts_.push_back(c);
    }
  }
  std::sort(learnts_.begin(), learnts_.end());
}

void CdclSolver::simplify() {
  if (!ok_ || propagate() != kNoRef) {
    ok_ = false;
    return;
  }
  for (Lit l : trail_) reason_[l.var()] = kNoRef;
  auto sweep = [this](std::vector<CRef>& list) {
    std::size_t j = 0;
    for (CRef c : list) {
      if (satisfied(c)) {
        remove_clause(c);
      } else {
        list[j++] = c;
      }
    }
    list.resize(j);
  };
  sweep(clauses_);
  sweep(learnts_);
  simp_trail_ = trail_.size();
  if (wasted_ * 4 > arena_.size()) garbage_collect();
}

void CdclSolver::garbage_collect() {
  std::vector<Lit> fresh;
  fresh.reserve(arena_.size() - wasted_);
  auto move_list = [&](std::vector<CRef>& list) {
    for (CRef& c : list) {
      CRef nc = static_cast<CRef>(fresh.size());
      std::uint32_t len = clause_size(c) + 2;
      fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + len);
      c = nc;
    }
  };
  move_list(clauses_);
  move_list(learnts_);
  arena_ = std::move(fresh);
  wasted_ = 0;
  for (auto& ws : watches_) ws.clear();
  for (CRef c : clauses_) attach(c);
  for (CRef c : learnts_) attach(c);
}

bool CdclSolver::out_of_time() { return deadline_ && Clock::now() > *deadline_; }

void CdclSolver::var_bump(Var v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v)) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void CdclSolver::clause_bump(CRef c) {
  float a = clause_activity(c) + static_cast<float>(cla_inc_);
  set_clause_activity(c, a);
  if (a > 1e20f) {
    for (CRef l : learnts_) set_clause_activity(l, clause_activity(l) * 1e-20f);
    cla_inc_ *= 1e-20;
  }
}

void CdclSolver::heap_insert(Var v) {
  if (heap_contains(v)) return;
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void CdclSolver::heap_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) >> 1;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

void CdclSolver::heap_down(std::size_t i) {
  Var v = heap_[i];
  std::size_t n = heap_.size();
  while (2 * i + 1 < n) {
    std::size_t child = 2 * i + 1;
    if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

Var CdclSolver::heap_pop() {
  Var top = heap_[0];
  heap_index_[top] = -1;
  Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

Result CdclSolver::solve(std::span<const Lit> assumptions) {
  ++stats_.solves;
  if (!ok_) return Result::Unsat;
  for (Lit a : assumptions) reserve_var(a.var());

  if (trail_.size() >= simp_trail_ + 256) {
    simplify();
    if (!ok_) return Result::Unsat;
  } else if (wasted_ * 2 > arena_.size() && arena_.size() > 4096) {
    for (Lit l : trail_) reason_[l.var()] = kNoRef;
    garbage_collect();
  }
  max_learnts_ = std::max(max_learnts_, static_cast<double>(num_original_) / 3.0 + 2000.0);

  std::vector<Lit> learnt;
  int restarts = 0;
  SearchResult status = SearchResult::Restart;
  while (status == SearchResult::Restart) {
    const double budget = luby(2.0, restarts) * 100.0;
    std::uint64_t conflicts_here = 0;
    for (;;) {
      CRef confl = propagate();
      if (confl != kNoRef) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          ok_ = false;
          status = SearchResult::Unsat;
          break;
        }
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoRef);
        } else {
          CRef c = alloc_clause(learnt, true);
          learnts_.push_back(c);
          attach(c);
          clause_bump(c);
          enqueue(learnt[0], c);
        }
        var_decay();
        clause_decay();
        if ((stats_.conflicts & 255u) == 0 && out_of_time()) {
          status = SearchResult::Timeout;
          break;
        }
        continue;
      }
      if (static_cast<double>(conflicts_here) >= budget) {
        status = SearchResult::Restart;
        break;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >=
          max_learnts_) {
        reduce_db();
      }
      Lit next = Lit::from_code(0xffffffffu);
      bool conflict_on_assumption = false;
      while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
        Lit a = assumptions[static_cast<std::size_t>(decision_level())];
        if (value(a) == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(a) == kFalse) {
          conflict_on_assumption = true;
          break;
        } else {
          next = a;
          break;
        }
      }
      if (conflict_on_assumption) {
        status = SearchResult::Unsat;
        break;
      }
      if (next.code() == 0xffffffffu) {
        ++stats_.decisions;
        next = pick_branch();
        if (next.code() == 0xffffffffu) {
          status = SearchResult::Sat;
          break;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoRef);
    }
    if (status == SearchResult::Restart) {
      cancel_until(0);
      ++restarts;
      max_learnts_ *= 1.02;
      if (out_of_time()) status = SearchResult::Timeout;
    }
  }

  Result result = Result::Unknown;
  if (status == SearchResult::Sat) {
    for (Var v = 0; v < num_vars(); ++v) model_[v] = assigns_[v] == kTrue;
    result = Result::Sat;
  } else if (status == SearchResult::Unsat) {
    result = Result::Unsat;
  }
  cancel_until(0);
  return result;
}

}  // namespace dynpdr::sat
