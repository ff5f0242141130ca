#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dpmc/term.hpp"

namespace dpmc {

struct BvResult {
  bool sat = false;
  /// Value of every free variable of the query (booleans as 0/1).
  std::map<Term, std::uint64_t, TermIdLess> model;
};

struct BvOptions {
  /// Conflict budget for the SAT core; negative means unlimited.
  std::int64_t conflict_budget = -1;
};

/// Decides a boolean term by bit-blasting to CNF. Throws ResourceLimit when
/// the budget is exhausted.
BvResult bv_check(Term t, const BvOptions& opts = {});

/// Returns indices into `assumptions` whose conjunction with `t` is
/// unsatisfiable. With `minimize`, a deletion pass shrinks the core.
/// Throws NotUnsat when t together with all assumptions is satisfiable.
std::vector<std::size_t> bv_unsat_core(Term t, std::span<const Term> assumptions,
                                       bool minimize = false,
                                       const BvOptions& opts = {});

}  // namespace dpmc
