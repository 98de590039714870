#include "dynpdr/frames.hpp"

#include <algorithm>
#include <set>

namespace dynpdr {

FrameSequence::FrameSequence(const TransitionSystem& ts, Options opts)
    : ts_(ts), opts_(std::move(opts)), trans_(encode_transition(ts)) {
  levels_.emplace_back();
  contexts_.emplace_back(shared(), 0);
  contexts_[0].add_units(ts_.init());
  push_frame();
}

SatContext::Shared FrameSequence::shared() const {
  return {&ts_, &trans_, opts_.factory, opts_.deadline, opts_.query_log, opts_.counters};
}

void FrameSequence::push_frame() {
  levels_.emplace_back();
  contexts_.emplace_back(shared(), levels_.size() - 1);
}

std::vector<Cube> FrameSequence::frame_cubes(FrameIdx i) const {
  std::vector<Cube> out;
  if (i == 0) {
    for (Lit l : ts_.init()) out.push_back(Cube{~l});
    return out;
  }
  for (FrameIdx j = i; j < levels_.size(); ++j) {
    out.insert(out.end(), levels_[j].begin(), levels_[j].end());
  }
  return out;
}

std::size_t FrameSequence::num_lemmas() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

bool FrameSequence::insert(const Cube& blocked, FrameIdx i) {
  for (FrameIdx j = i; j < levels_.size(); ++j) {
    for (const Cube& old : levels_[j]) {
      if (subsumes(old, blocked)) return false;
    }
  }
  for (FrameIdx j = 1; j <= i; ++j) {
    auto& lv = levels_[j];
    lv.erase(std::remove_if(lv.begin(), lv.end(),
                            [&](const Cube& old) { return subsumes(blocked, old); }),
             lv.end());
  }
  levels_[i].push_back(blocked);
  return true;
}

bool FrameSequence::add_lemma(const Cube& blocked, FrameIdx i) {
  if (i == 0 || i >= levels_.size()) throw std::out_of_range("add_lemma: bad frame index");
  if (opts_.lemma_log) opts_.lemma_log->record("lemma " + std::to_string(i) + ' ' + to_string(blocked));
  if (!insert(blocked, i)) return false;
  for (FrameIdx j = 1; j <= i; ++j) contexts_[j].add_blocking_clause(blocked);
  return true;
}

std::optional<FrameIdx> FrameSequence::propagate() {
  fixpoint_.reset();
  const FrameIdx k = depth();
  for (FrameIdx i = 1; i < k; ++i) {
    const std::vector<Cube> snapshot = levels_[i];
    for (const Cube& c : snapshot) {
      auto& lv = levels_[i];
      auto it = std::find(lv.begin(), lv.end(), c);
      if (it == lv.end()) continue;  // removed by a stronger pushed lemma
      if (contexts_[i].relind(c)) continue;
      lv.erase(it);
      if (opts_.lemma_log) opts_.lemma_log->record("push " + std::to_string(i + 1) + ' ' + to_string(c));
      if (insert(c, i + 1)) contexts_[i + 1].add_blocking_clause(c);
    }
    if (levels_[i].empty()) {
      fixpoint_ = i;
      return i;
    }
  }
  return std::nullopt;
}

std::vector<Clause> FrameSequence::extract_invariant() const {
  if (!fixpoint_) throw NotAtFixpoint();
  std::vector<Clause> inv;
  for (const Cube& c : frame_cubes(*fixpoint_)) inv.push_back(negate(c));
  return inv;
}

std::vector<std::string> FrameSequence::audit() const {
  std::vector<std::string> issues;
  const FrameIdx k = depth();
  if (!levels_[0].empty()) issues.push_back("F_0 holds lemmas besides I");

  for (FrameIdx i = 1; i <= k; ++i) {
    for (const Cube& c : levels_[i]) {
      if (intersects_initial(ts_, c)) issues.push_back("lemma " + to_string(c) + " excludes an initial state");
    }
  }

  for (FrameIdx i = 1; i < k; ++i) {
    std::vector<Cube> hi = frame_cubes(i + 1), lo = frame_cubes(i);
    std::set<Cube> lo_set(lo.begin(), lo.end());
    for (const Cube& c : hi) {
      if (!lo_set.count(c)) issues.push_back("F_" + std::to_string(i + 1) + " not contained in F_" + std::to_string(i));
    }
  }

  for (FrameIdx i = 1; i <= k; ++i) {
    for (const Cube& c : levels_[i]) {
      for (FrameIdx j = i; j <= k; ++j) {
        for (const Cube& d : levels_[j]) {
          if (&c != &d && subsumes(d, c)) {
            issues.push_back("lemma " + to_string(c) + " at level " + std::to_string(i) +
                             " subsumed by " + to_string(d) + " at level " + std::to_string(j));
          }
        }
      }
    }
  }

  auto load_frame = [&](sat::CdclSolver& s, FrameIdx i) {
    s.reserve_var(ts_.num_vars() - 1);
    for (const auto& cl : trans_.clauses) s.add_clause(cl);
    if (i == 0) {
      for (Lit l : ts_.init()) s.add_clause({l});
    } else {
      for (const Cube& c : frame_cubes(i)) {
        std::vector<Lit> cl;
        for (Lit l : c) cl.push_back(~l);
        s.add_clause(cl);
      }
    }
  };

  for (FrameIdx i = 0; i < k; ++i) {
    sat::CdclSolver s;
    load_frame(s, i);
    for (const Cube& c : frame_cubes(i + 1)) {
      Cube next = prime(ts_, c);
      if (s.solve(next.lits()) != sat::Result::Unsat) {
        issues.push_back("F_" + std::to_string(i) + " ∧ T does not imply lemma " + to_string(negate(c)) +
                         "' of F_" + std::to_string(i + 1));
      }
    }
    Lit bad = ts_.bad();
    if (s.solve(std::span<const Lit>(&bad, 1)) != sat::Result::Unsat) {
      issues.push_back("F_" + std::to_string(i) + " intersects the bad states");
    }
  }
  return issues;
}

}  // namespace dynpdr
