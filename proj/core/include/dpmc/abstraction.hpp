#pragma once

#include <map>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dpmc/abstract.hpp"
#include "dpmc/transition_system.hpp"

namespace dpmc {

/// Bijection between concrete constants/variables/operations and abstract
/// symbols.
class AbstractionMap {
 public:
  AbstractionMap(std::shared_ptr<TermManager> tm, std::shared_ptr<AbstractContext> ctx)
      : tm_(std::move(tm)), ctx_(std::move(ctx)) {}

  /// α on a concrete term.
  ATerm alpha(Term t);
  /// γ on an abstract term; unknown symbols throw UnmappedSymbol.
  Term gamma(ATerm t) const;

  /// Registers a variable pair, creating the abstract side if needed.
  Sym map_var(Term v);
  Sym symbol_of(Term leaf) const;
  Term origin_of(Sym s) const;
  bool has(Sym s) const;
  /// Next-frame and timed copies, registered on both sides.
  Sym primed(Sym v);
  Sym timed(Sym v, unsigned step);

  TermManager& tm() const { return *tm_; }
  AbstractContext& ctx() const { return *ctx_; }

 private:
  std::shared_ptr<TermManager> tm_;
  std::shared_ptr<AbstractContext> ctx_;
  std::unordered_map<Term, Sym> fwd_;
  std::unordered_map<Sym, Term> bwd_;
  std::unordered_map<Term, ATerm> memo_;
};

/// Abstract counterpart of a transition system. Current-frame variables
/// are plain symbols; next-frame copies carry a trailing quote.
struct AbstractSystem {
  std::shared_ptr<AbstractContext> ctx;
  std::shared_ptr<AbstractionMap> map;
  const TransitionSystem* concrete = nullptr;

  std::vector<Sym> state_vars;
  std::vector<Sym> input_vars;
  ATerm init = nullptr;
  /// Next-state equation x' = α(next(x)) per state variable.
  std::map<Sym, ATerm, SymLess> next;
  ATerm trans = nullptr;  // conjunction of the equations
  ATerm prop = nullptr;
  ATerm prop_next = nullptr;

  /// Renames current variables to their next-frame copies.
  ATerm prime(ATerm t) const;
  /// Renames next-frame copies back to current variables.
  ATerm unprime(ATerm t) const;
  /// Renames current variables to v@i and next copies to v@(i+1).
  ATerm at_step(ATerm t, unsigned i) const;

  std::unordered_map<Sym, Sym> prime_map;
  std::unordered_map<Sym, Sym> unprime_map;
};

/// Builds Î, T̂, P̂ and the symbol correspondence.
AbstractSystem dp_abstract(const TransitionSystem& ts);

/// One step of an abstract counterexample. `lits` are over current-frame
/// symbols; `trans` are next-state equations (simplified along the path
/// taken) over current and next-frame symbols, empty at the last step.
struct AbstractStep {
  std::vector<ALit> lits;
  std::vector<ALit> trans;
};

struct AbstractTrace {
  std::vector<AbstractStep> steps;
  /// Property violation at the last step (over current-frame symbols).
  std::vector<ALit> bad;
};

/// A labelled piece of a concretized trace.
struct TracePart {
  enum class Kind { Init, Lit, Trans, Bad };
  Kind kind;
  unsigned step;
  ATerm abstract;  // over timed symbols v@i
  Term concrete;   // γ-image over timed variables
};

/// Splits the concretized trace into labelled conjuncts: Î at step 0, all
/// step literals, the path-simplified next-state equations and ¬P̂ at the
/// last step.
std::vector<TracePart> concretize_parts(const AbstractSystem& sys,
                                        const AbstractTrace& trace);

/// Conjunction of all concretized trace parts (true for an empty trace).
Term dp_concrete(const AbstractSystem& sys, const AbstractTrace& trace);

/// Timed concrete copy v@i of a system variable.
Term timed_var(TermManager& tm, Term v, unsigned step);

}  // namespace dpmc
