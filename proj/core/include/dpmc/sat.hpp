#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dpmc::sat {

using Var = int;

/// Literal encoded as 2*var + sign; sign set means negated.
struct Lit {
  int x = -2;

  static Lit make(Var v, bool negated = false) { return Lit{2 * v + (negated ? 1 : 0)}; }
  Var var() const { return x >> 1; }
  bool sign() const { return x & 1; }
  Lit operator~() const { return Lit{x ^ 1}; }
  friend bool operator==(Lit a, Lit b) { return a.x == b.x; }
  friend bool operator!=(Lit a, Lit b) { return a.x != b.x; }
  friend bool operator<(Lit a, Lit b) { return a.x < b.x; }
};

enum class Value : std::int8_t { False = 0, True = 1, Undef = 2 };

enum class Result { Sat, Unsat, Unknown };

/// Conflict-driven clause learning solver with two watched literals,
/// first-UIP learning, activity-based branching, Luby restarts and
/// assumption-based solving with final-conflict extraction.
class Solver {
 public:
  Solver();

  Var new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }

  /// Adds a permanent clause. Returns false if the formula became trivially
  /// unsatisfiable.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  /// Solves under the given assumptions. A negative conflict budget means
  /// unlimited; exceeding it yields Result::Unknown.
  Result solve(std::span<const Lit> assumptions = {}, std::int64_t conflict_budget = -1);

  /// Model value after Result::Sat.
  bool model_value(Var v) const { return model_[v] == Value::True; }
  bool model_value(Lit l) const { return model_value(l.var()) != l.sign(); }

  /// Subset of the assumptions (as passed) responsible for Result::Unsat.
  const std::vector<Lit>& conflict_assumptions() const { return final_conflict_; }

  std::int64_t conflicts() const { return total_conflicts_; }

 private:
  struct Watcher {
    int clause;
    Lit blocker;
  };
  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    double activity = 0;
  };

  Value value(Lit l) const {
    const Value v = assigns_[l.var()];
    if (v == Value::Undef) return Value::Undef;
    return (v == Value::True) != l.sign() ? Value::True : Value::False;
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }

  void assign(Lit l, int reason);
  int propagate();
  void analyze(int confl, std::vector<Lit>& learnt, int& bt_level);
  void analyze_final(Lit p);
  void cancel_until(int lvl);
  Lit pick_branch();
  void bump(Var v);
  void attach(int ci);
  void heap_insert(Var v);
  Var heap_pop();
  void heap_up(int i);
  void heap_down(int i);

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<Value> assigns_;
  std::vector<Value> model_;
  std::vector<int> levels_;
  std::vector<int> reasons_;
  std::vector<bool> polarity_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  bool ok_ = true;

  std::vector<Var> heap_;
  std::vector<int> heap_pos_;

  std::vector<Lit> assumptions_;
  std::vector<Lit> final_conflict_;
  std::int64_t total_conflicts_ = 0;
};

}  // namespace dpmc::sat
