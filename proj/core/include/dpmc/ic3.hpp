#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "dpmc/abstraction.hpp"
#include "dpmc/euf.hpp"
#include "dpmc/lemma_store.hpp"

namespace dpmc {

struct Ic3Config {
  bool propagation = true;
  int prop_bound = 20;
  int max_frames = 64;
  std::int64_t max_obligations = 200000;
  /// Skip propagation for query shapes that previously gave no new lemma.
  bool cache_shapes = true;
  EufOptions euf;
};

struct Ic3Stats {
  std::uint64_t frames = 0;
  std::uint64_t obligations = 0;
  std::uint64_t euf_queries = 0;
  std::uint64_t queries_skipped_by_propagation = 0;
  std::uint64_t propagation_calls = 0;
  std::uint64_t propagation_cache_hits = 0;
};

struct Ic3Result {
  /// True when no abstract counterexample exists (the empty trace).
  bool safe = false;
  AbstractTrace trace;
  /// Inductive invariant over current-state symbols when safe.
  AbstractFormula invariant;
};

/// IC3 over the abstract system. Every query is conjoined with the lemma
/// instances and, when enabled, handed to propagation first.
class Ic3 {
 public:
  Ic3(AbstractSystem& sys, LemmaStore& lemmas, Ic3Config cfg, Ic3Stats& stats);

  /// Throws ResourceLimit when frame or obligation budgets are exhausted.
  Ic3Result check();

  /// Shrinks a cube blocked at `frame` (relative to F[frame-1]), keeping
  /// it disjoint from the initial states. Returns the kept literals.
  std::vector<ALit> generalize(const std::vector<ALit>& cube, int frame,
                               const std::vector<std::size_t>& core);

  /// Frame i as a formula over current-state symbols (F0 is Î).
  AbstractFormula frame(int i) const;

 private:
  struct Outcome {
    bool sat = false;
    EufModel model;
    std::vector<std::size_t> core;
  };
  struct Obligation {
    std::vector<ALit> cube;
    int frame;
    int depth;
    int parent;
    std::vector<ALit> trans;  // step from this cube to the parent cube
  };

  Outcome query(const AbstractFormula& phi, const std::vector<ATerm>& assumptions);
  std::vector<ALit> extract_cube(const EufModel& m);
  std::vector<ALit> path_trans(const EufModel& m);
  bool relative_inductive(const std::vector<ALit>& cube, int frame, Outcome* out);
  bool intersects_init(const std::vector<ALit>& cube);
  void add_blocked(const std::vector<ALit>& cube, int frame);
  bool block(std::vector<ALit> bad, int k, AbstractTrace& trace);
  int push_clauses(int k);
  AbstractTrace build_trace(const std::vector<Obligation>& obs, int leaf,
                            const std::vector<ALit>& bad);
  void add_lemma_instances(AbstractFormula& f, bool with_drl_only = false);

  AbstractSystem& sys_;
  AbstractContext& ctx_;
  LemmaStore& lemmas_;
  Ic3Config cfg_;
  Ic3Stats& stats_;
  std::vector<std::vector<AClause>> levels_;  // delta clauses per frame index
  std::vector<ATerm> state_terms_;
  std::vector<ATerm> consts_;
  std::vector<ATerm> state_preds_;
  std::set<std::vector<std::uint32_t>> barren_shapes_;
  std::vector<ALit> pending_trans_;
};

Ic3Result ic3_check(AbstractSystem& sys, LemmaStore& lemmas, const Ic3Config& cfg = {},
                    Ic3Stats* stats = nullptr);

/// Re-checks an invariant: Î ⇒ Inv, Inv ∧ T̂ ⇒ Inv', Inv ⇒ P̂, all in EUF
/// with the lemma instances.
bool verify_invariant(AbstractSystem& sys, const LemmaStore& lemmas,
                      const AbstractFormula& inv, const EufOptions& opts = {});

/// Lemmas and their frame-shifted copies (current to next and back).
std::vector<ATerm> lemma_instances(AbstractSystem& sys, const LemmaStore& lemmas,
                                   bool drl_only = false);

}  // namespace dpmc
