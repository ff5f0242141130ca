#pragma once

#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "dpmc/abstract.hpp"

namespace dpmc {

struct Lemma {
  ATerm formula = nullptr;
  /// Rule id for propagation lemmas, refinement tag otherwise.
  std::string origin;
};

/// Accumulated propagation lemmas (DPL) and refinement lemmas (DRL).
/// Both sets keep insertion order and are deduplicated by hash-consed term.
class LemmaStore {
 public:
  /// Returns true when the lemma was not yet present.
  bool add_dpl(ATerm f, std::string origin = {});
  bool add_drl(ATerm f, std::string origin = {});
  bool has(ATerm f) const { return seen_.count(f) != 0; }

  /// Constants introduced by refinement; they refine state cubes.
  bool add_constant(ATerm c);
  const std::vector<ATerm>& constants() const { return consts_; }

  const std::vector<Lemma>& dpl() const { return dpl_; }
  const std::vector<Lemma>& drl() const { return drl_; }
  std::size_t size() const { return dpl_.size() + drl_.size(); }

  /// All lemmas as unit clauses, DRLs first.
  AbstractFormula formula() const;
  /// Writes one "DPL <term>" or "DRL <term>" line per lemma.
  void dump(std::ostream& out) const;

 private:
  std::vector<Lemma> dpl_, drl_;
  std::unordered_set<ATerm> seen_;
  std::vector<ATerm> consts_;
};

}  // namespace dpmc
