#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "dpmc/abstract.hpp"

namespace dpmc {

/// Non-backtrackable congruence closure over abstract terms with
/// explanations. Distinct constants (and the boolean constants) are
/// pairwise different; merging two of them makes the closure inconsistent.
class CongruenceClosure {
 public:
  explicit CongruenceClosure(AbstractContext& ctx);

  /// Registers a term and its subterms; returns its node index.
  int add(ATerm t);
  bool has(ATerm t) const { return index_.count(t) != 0; }

  /// Asserts a = b justified by `reason` (a caller label >= 0).
  void merge(ATerm a, ATerm b, int reason);
  /// Asserts a != b justified by `reason`.
  void assert_diseq(ATerm a, ATerm b, int reason);

  bool equal(ATerm a, ATerm b);
  /// Representative node index of a registered term.
  int find(ATerm t);
  ATerm rep_term(ATerm t) { return terms_[find_node(add(t))]; }
  /// Constant in the class of t, nullptr when none.
  ATerm const_of(ATerm t);

  /// Labels justifying a = b (must currently hold).
  std::vector<int> explain(ATerm a, ATerm b);

  /// Checks pending disequalities; true when consistent.
  bool check();
  /// Classes of a and b are known distinct: distinct constants or an
  /// asserted disequality between them.
  bool known_diseq(ATerm a, ATerm b);
  /// Registered terms in the class of t, in registration order.
  std::vector<ATerm> members(ATerm t);
  bool inconsistent() const { return conflict_valid_; }
  /// Reason labels of the detected conflict (sorted, unique).
  const std::vector<int>& conflict() const { return conflict_; }

  const std::vector<ATerm>& terms() const { return terms_; }

 private:
  struct Edge {
    int to = -1;
    int reason = -1;       // >= 0: caller label
    int cong_a = -1;       // congruence between two app nodes
    int cong_b = -1;
  };

  int find_node(int n);
  void union_nodes(int a, int b, int reason, int ca, int cb);
  void process_pending();
  void explain_nodes(int a, int b, std::vector<int>& out);
  std::vector<int> signature(int app);
  void set_conflict(std::vector<int> labels);

  AbstractContext& ctx_;
  std::unordered_map<ATerm, int> index_;
  std::vector<ATerm> terms_;
  std::vector<int> parent_;  // union-find
  std::vector<int> size_;
  std::vector<int> const_node_;  // per representative
  std::vector<std::vector<int>> uses_;
  std::vector<Edge> proof_;  // proof forest edge per node
  std::map<std::vector<int>, int> sigs_;
  struct Pending {
    int a, b, reason, ca, cb;
  };
  std::vector<Pending> pending_;
  struct Diseq {
    int a, b, reason;
  };
  std::vector<Diseq> diseqs_;
  bool conflict_valid_ = false;
  std::vector<int> conflict_;
};

}  // namespace dpmc
