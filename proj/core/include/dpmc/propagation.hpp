#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dpmc/abstract.hpp"
#include "dpmc/congruence.hpp"
#include "dpmc/lemma_store.hpp"

namespace dpmc {

enum class PropVerdict : std::uint8_t { Unsat, Unknown };

struct PropEvent {
  enum class Kind : std::uint8_t {
    Touch, GroundEval, Rewrite, Assert, IteCollapse, Contradiction, Lemma,
  };
  Kind kind;
  std::string rule;  // rule id, empty for non-rule events
  std::string text;
  ATerm subject = nullptr;
};

std::string to_string(const PropEvent& e);

struct PropOptions {
  int bound = 20;
  bool record_events = true;
};

struct PropResult {
  PropVerdict verdict = PropVerdict::Unknown;
  /// Derived facts, each a BV-valid rule instance over symb(phi).
  std::vector<Lemma> psi;
  std::vector<PropEvent> events;
  int iterations = 0;
};

/// Constant propagation over an abstract formula. Derives facts from the
/// concrete semantics of constants and the rule table, maintaining an
/// equality closure, decided predicates and an order graph.
class Propagator {
 public:
  Propagator(AbstractContext& ctx, const AbstractFormula& phi, PropOptions opts = {});

  /// Runs the propagation loop up to the iteration bound.
  PropResult run();

  /// Pushes constant c into every application whose argument is in c's
  /// class, cascading through applications that collapse into the class.
  /// Returns the touched applications with c substituted.
  std::vector<ATerm> update_related_uf(ATerm c);
  /// Applies local, relational, ite and clause rules to a fixpoint.
  void apply_rules();

  bool contradiction();
  /// Constants of the formula in symbol order.
  const std::vector<ATerm>& constants() const { return consts_; }
  const std::vector<Lemma>& psi() const { return psi_; }
  const std::vector<PropEvent>& events() const { return events_; }
  CongruenceClosure& closure() { return cc_; }
  /// Three-valued value of a boolean term: 1 true, 0 false, -1 unknown.
  int value(ATerm t);

 private:
  void assert_term(ATerm t, bool val);
  void process(ATerm app, bool cascade_args);
  bool is_ground(ATerm app);
  ATerm substituted(ATerm app);
  void ground_eval(ATerm app);
  bool local_rules(ATerm app);
  bool relgraph();
  bool ite_rules();
  bool clause_rules();
  ATerm formula_const(std::uint64_t v, unsigned width) const;
  void emit(const std::string& rule, ATerm lemma);
  void event(PropEvent::Kind k, std::string rule, std::string text, ATerm subject);
  void fail(std::string why);

  AbstractContext& ctx_;
  PropOptions opts_;
  CongruenceClosure cc_;
  std::vector<ATerm> apps_;  // applications in traversal order
  std::unordered_set<ATerm> app_set_;
  std::vector<ATerm> ites_;  // non-boolean ite nodes
  std::vector<ATerm> consts_;
  std::map<std::pair<std::uint64_t, unsigned>, ATerm> const_by_value_;
  std::vector<AClause> clauses_;
  std::unordered_map<ATerm, bool> props_;
  std::unordered_set<ATerm> asserted_true_, asserted_false_;
  std::set<std::pair<std::string, ATerm>> fired_;
  std::unordered_set<ATerm> evaluated_, collapsed_;
  std::unordered_set<ATerm> psi_seen_;
  std::vector<Lemma> psi_;
  std::vector<PropEvent> events_;
  std::uint64_t changes_ = 0;
  bool failed_ = false;
};

/// Runs propagation on phi and appends new facts to the DPL set of lemmas.
PropVerdict propagate(AbstractContext& ctx, const AbstractFormula& phi, int bound,
                      LemmaStore& lemmas, PropResult* detail = nullptr);

}  // namespace dpmc
