#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dpmc/abstraction.hpp"
#include "dpmc/bitblast.hpp"
#include "dpmc/ic3.hpp"
#include "dpmc/lemma_store.hpp"

namespace dpmc {

struct CegarConfig {
  bool propagation = true;
  int prop_bound = 20;
  int max_frames = 1000;
  int max_refinements = 10000;
  std::int64_t max_obligations = 1000000;
  bool minimize_cores = true;
  /// Skip propagation for query shapes that previously gave no new lemma.
  bool cache_shapes = true;
  EufOptions euf;
  BvOptions bv;
};

struct CegarStats {
  std::uint64_t refinements = 0;
  std::uint64_t dpl_count = 0;
  std::uint64_t drl_count = 0;
  std::uint64_t refinement_constants = 0;
  std::uint64_t ic3_calls = 0;
  Ic3Stats ic3;  // accumulated over all IC3 calls (frames: maximum)
  double wall_ms = 0;
};

enum class VerdictKind : std::uint8_t { Safe, Unsafe, Unknown };

std::string_view to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  /// Certified inductive invariant (Safe).
  AbstractFormula invariant;
  /// Concrete counterexample that replays (Unsafe).
  ConcreteTrace witness;
  std::string reason;  // Unknown
  CegarStats stats;
  LemmaStore lemmas;
  /// Keeps the abstract terms of invariant and lemmas alive.
  std::shared_ptr<AbstractSystem> system;
};

/// The abstraction-refinement loop around IC3.
Verdict dp_ic3(const TransitionSystem& ts, const CegarConfig& cfg = {});

struct Refinement {
  std::vector<ATerm> lemmas;
  /// Constants introduced when no single-transition lemma exists.
  std::vector<ATerm> constants;
};

/// Refutes a spurious abstract trace from a bit-level unsat core. Throws
/// NotSpurious when the concretized trace is satisfiable.
Refinement dp_refine(AbstractSystem& sys, const AbstractTrace& acex, bool minimize = true,
                     const BvOptions& bv = {});

/// Reads a concrete trace for the system out of a model over timed variables.
ConcreteTrace extract_witness(const AbstractSystem& sys, std::size_t steps,
                              const std::map<Term, std::uint64_t, TermIdLess>& model);

}  // namespace dpmc
