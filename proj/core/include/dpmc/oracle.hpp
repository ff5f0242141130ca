#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dpmc/transition_system.hpp"

namespace dpmc {

struct ValidityVerdict {
  bool valid = true;
  /// Falsifying assignment (variable name to value) when not valid.
  std::map<std::string, std::uint64_t> counter_model;
  unsigned width = 0;  // width at which the counter-model was found (schemas)
};

/// Exhaustively checks that a boolean term evaluates to true under every
/// assignment of its free variables. Throws TooLarge above `max_bits`.
ValidityVerdict bv_valid_exhaustive(Term t, unsigned max_bits = 24);

/// Width-generic variant: `build` constructs the formula at a given width.
ValidityVerdict bv_valid_exhaustive(
    const std::function<Term(TermManager&, unsigned)>& build,
    const std::vector<unsigned>& widths, unsigned max_bits = 24);

struct ReachVerdict {
  bool reachable = false;
  /// Shortest trace to a property violation when reachable.
  ConcreteTrace trace;
  std::uint64_t states_explored = 0;
};

/// Explicit-state breadth-first search over all initial states and input
/// valuations. Throws TooLarge when state plus input bits exceed `max_bits`.
ReachVerdict bfs_reachability(const TransitionSystem& ts, unsigned max_bits = 20);

struct OpMix {
  std::set<OpKind> ops;
  /// All datapath operations.
  static OpMix all();
  /// All operations except shifts.
  static OpMix no_shifts();
};

/// Deterministic random transition system with at most `state_bits` bits of
/// state, one small input and a relational or equality property.
TransitionSystem random_system(std::uint64_t seed, unsigned state_bits = 6,
                               const OpMix& mix = OpMix::all());

}  // namespace dpmc
