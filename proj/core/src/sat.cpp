#include "dpmc/sat.hpp"

#include <algorithm>
#include <cmath>

namespace dpmc::sat {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  for (; size < x + 1; seq++, size = 2 * size + 1) {
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

Solver::Solver() = default;

Var Solver::new_var() {
  const Var v = num_vars();
  assigns_.push_back(Value::Undef);
  levels_.push_back(0);
  reasons_.push_back(-1);
  polarity_.push_back(true);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_pos_.push_back(-1);
  heap_insert(v);
  return v;
}

bool Solver::add_clause(std::span<const Lit> in) {
  if (!ok_) return false;
  cancel_until(0);
  std::vector<Lit> lits(in.begin(), in.end());
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> kept;
  Lit prev{-2};
  for (Lit l : lits) {
    if (value(l) == Value::True || l == ~prev) return true;
    if (value(l) != Value::False && l != prev) kept.push_back(l);
    prev = l;
  }
  if (kept.empty()) return ok_ = false;
  if (kept.size() == 1) {
    assign(kept[0], -1);
    if (propagate() != -1) ok_ = false;
    return ok_;
  }
  clauses_.push_back(Clause{std::move(kept)});
  attach(static_cast<int>(clauses_.size()) - 1);
  return true;
}

void Solver::attach(int ci) {
  const auto& l = clauses_[ci].lits;
  watches_[(~l[0]).x].push_back({ci, l[1]});
  watches_[(~l[1]).x].push_back({ci, l[0]});
}

void Solver::assign(Lit l, int reason) {
  assigns_[l.var()] = l.sign() ? Value::False : Value::True;
  levels_[l.var()] = level();
  reasons_[l.var()] = reason;
  trail_.push_back(l);
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    auto& ws = watches_[p.x];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i];
      if (value(w.blocker) == Value::True) {
        ws[j++] = ws[i++];
        continue;
      }
      auto& lits = clauses_[w.clause].lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      const Lit first = lits[0];
      const Watcher nw{w.clause, first};
      if (first != w.blocker && value(first) == Value::True) {
        ws[j++] = nw;
        continue;
      }
      bool found = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) != Value::False) {
          lits[1] = lits[k];
          lits[k] = false_lit;
          watches_[(~lits[1]).x].push_back(nw);
          found = true;
          break;
        }
      }
      if (found) continue;
      ws[j++] = nw;
      if (value(first) == Value::False) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.clause;
      }
      assign(first, w.clause);
    }
    ws.resize(j);
  }
  return -1;
}

void Solver::bump(Var v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& bt_level) {
  int path = 0;
  Lit p{-2};
  learnt.clear();
  learnt.push_back(p);
  int index = static_cast<int>(trail_.size()) - 1;
  do {
    const auto& lits = clauses_[confl].lits;
    for (std::size_t j = (p.x == -2 ? 0 : 1); j < lits.size(); ++j) {
      const Lit q = lits[j];
      if (!seen_[q.var()] && levels_[q.var()] > 0) {
        bump(q.var());
        seen_[q.var()] = 1;
        if (levels_[q.var()] >= level())
          ++path;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[trail_[index--].var()]) {
    }
    p = trail_[index + 1];
    confl = reasons_[p.var()];
    seen_[p.var()] = 0;
    --path;
  } while (path > 0);
  learnt[0] = ~p;

  bt_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (levels_[learnt[i].var()] > levels_[learnt[max_i].var()]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = levels_[learnt[1].var()];
  }
  for (Lit l : learnt) seen_[l.var()] = 0;
}

void Solver::analyze_final(Lit p) {
  final_conflict_.clear();
  final_conflict_.push_back(p);
  if (level() == 0) return;
  seen_[p.var()] = 1;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[0]; --i) {
    const Var x = trail_[i].var();
    if (!seen_[x]) continue;
    if (reasons_[x] == -1) {
      if (levels_[x] > 0) final_conflict_.push_back(trail_[i]);
    } else {
      const auto& lits = clauses_[reasons_[x]].lits;
      for (std::size_t j = 1; j < lits.size(); ++j)
        if (levels_[lits[j].var()] > 0) seen_[lits[j].var()] = 1;
    }
    seen_[x] = 0;
  }
  seen_[p.var()] = 0;
}

void Solver::cancel_until(int lvl) {
  if (level() <= lvl) return;
  for (int c = static_cast<int>(trail_.size()) - 1; c >= trail_lim_[lvl]; --c) {
    const Var x = trail_[c].var();
    assigns_[x] = Value::Undef;
    reasons_[x] = -1;
    polarity_[x] = trail_[c].sign();
    if (heap_pos_[x] < 0) heap_insert(x);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    const Var v = heap_pop();
    if (assigns_[v] == Value::Undef) return Lit::make(v, polarity_[v]);
  }
  return Lit{-2};
}

Result Solver::solve(std::span<const Lit> assumptions, std::int64_t budget) {
  final_conflict_.clear();
  model_.clear();
  if (!ok_) return Result::Unsat;
  cancel_until(0);
  assumptions_.assign(assumptions.begin(), assumptions.end());
  const std::int64_t start = total_conflicts_;
  std::vector<Lit> learnt;

  for (int restart = 0;; ++restart) {
    const auto limit = static_cast<std::int64_t>(luby(2.0, restart) * 100);
    std::int64_t local = 0;
    for (;;) {
      const int confl = propagate();
      if (confl != -1) {
        ++total_conflicts_;
        ++local;
        if (level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          assign(learnt[0], -1);
        } else {
          clauses_.push_back(Clause{learnt, true});
          const int ci = static_cast<int>(clauses_.size()) - 1;
          attach(ci);
          assign(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        if (budget >= 0 && total_conflicts_ - start >= budget) {
          cancel_until(0);
          return Result::Unknown;
        }
        continue;
      }
      if (local >= limit) {
        cancel_until(0);
        break;
      }
      Lit next{-2};
      while (level() < static_cast<int>(assumptions_.size())) {
        const Lit a = assumptions_[level()];
        if (value(a) == Value::True) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(a) == Value::False) {
          analyze_final(a);
          cancel_until(0);
          return Result::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next.x == -2) {
        next = pick_branch();
        if (next.x == -2) {
          model_ = assigns_;
          cancel_until(0);
          return Result::Sat;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      assign(next, -1);
    }
  }
}

// Binary max-heap over variable activity.

void Solver::heap_insert(Var v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

Var Solver::heap_pop() {
  const Var top = heap_[0];
  heap_[0] = heap_.back();
  heap_pos_[heap_[0]] = 0;
  heap_.pop_back();
  heap_pos_[top] = -1;
  if (!heap_.empty()) heap_down(0);
  return top;
}

void Solver::heap_up(int i) {
  const Var v = heap_[i];
  while (i > 0) {
    const int parent = (i - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_down(int i) {
  const Var v = heap_[i];
  const int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]])
      ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

}  // namespace dpmc::sat
