#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpmc/abstract.hpp"

namespace dpmc {

struct EufOptions {
  /// Maximum number of theory conflicts; negative means unlimited.
  std::int64_t theory_budget = 100000;
  /// Conflict budget of each SAT call; negative means unlimited.
  std::int64_t sat_budget = -1;
  /// When non-empty, each query is written there as SMT-LIB2 text.
  std::string dump_dir;
};

/// Model of a satisfiable EUF query: equivalence classes of the registered
/// terms and truth values of atoms.
class EufModel {
 public:
  /// Class id of a term, -1 when the term was not part of the query.
  int class_of(ATerm t) const;
  bool same_class(ATerm a, ATerm b) const;
  /// Value of a boolean term; atoms outside the query default to false
  /// unless decided by the classes.
  bool value(ATerm t) const;
  /// Constant of the class of t, nullptr when none.
  ATerm const_of(ATerm t) const;

  std::unordered_map<ATerm, int> classes;
  std::unordered_map<int, ATerm> class_const;
  std::unordered_map<ATerm, bool> atoms;
  int true_class = -1;
  int false_class = -1;
};

struct EufResult {
  bool sat = false;
  EufModel model;
  /// Indices into the assumptions whose conjunction with phi is unsat.
  std::vector<std::size_t> core;
};

struct EufQuery {
  AbstractFormula phi;
  std::vector<ATerm> assumptions;
  /// Extra terms whose classes the model must report.
  std::vector<ATerm> observe;
};

/// Decides a ground EUF query (boolean structure plus congruence) with a
/// lazy SAT/congruence loop. Throws ResourceLimit on budget exhaustion.
EufResult euf_check(AbstractContext& ctx, const EufQuery& q, const EufOptions& opts = {});

/// Convenience: single boolean term, no assumptions.
EufResult euf_check(AbstractContext& ctx, ATerm phi, const EufOptions& opts = {});

/// Number of queries written to dump directories so far.
std::uint64_t euf_dump_count();

}  // namespace dpmc
