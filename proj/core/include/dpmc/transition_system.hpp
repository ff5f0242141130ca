#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dpmc/term.hpp"

namespace dpmc {

/// Word-level safety problem: state/input variables, initial condition,
/// functional next-state map and a property that must hold in every
/// reachable state.
struct TransitionSystem {
  std::shared_ptr<TermManager> tm = std::make_shared<TermManager>();
  std::vector<Term> state_vars;
  std::vector<Term> input_vars;
  Term init = nullptr;
  std::map<Term, Term, TermIdLess> next;
  Term property = nullptr;

  /// Throws std::logic_error when an invariant of the tuple is violated.
  void validate() const;

  unsigned state_bits() const;
  unsigned input_bits() const;
};

/// One step of a concrete execution: values of all state and input
/// variables of the system.
struct ConcreteStep {
  std::map<Term, std::uint64_t, TermIdLess> state;
  std::map<Term, std::uint64_t, TermIdLess> inputs;
};

using ConcreteTrace = std::vector<ConcreteStep>;

/// Steps the trace under concrete semantics. Returns an empty string when
/// the trace starts in an initial state, follows the next-state functions
/// and ends in a state violating the property; otherwise a diagnostic.
std::string replay_counterexample(const TransitionSystem& ts,
                                  const ConcreteTrace& trace);

}  // namespace dpmc
