#include "dpmc/cegar.hpp"

#include <algorithm>
#include <chrono>

#include "dpmc/errors.hpp"

namespace dpmc {

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Safe: return "SAFE";
    case VerdictKind::Unsafe: return "UNSAFE";
    case VerdictKind::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

// Renames v@j to v and v@(j+1) to v'.
ATerm fold_steps(AbstractSystem& sys, ATerm t, unsigned j) {
  AbstractContext& ctx = *sys.ctx;
  std::unordered_map<Sym, Sym> m;
  for (Sym s : symb(t)) {
    if (!s->is_var()) continue;
    const auto at = s->name.rfind('@');
    if (at == std::string::npos) continue;
    const unsigned step = static_cast<unsigned>(std::stoul(s->name.substr(at + 1)));
    Sym base = ctx.find_symbol(s->name.substr(0, at));
    if (!base) throw UnmappedSymbol("no base symbol for " + s->name);
    if (step == j)
      m.emplace(s, base);
    else if (step == j + 1)
      m.emplace(s, ctx.primed(base));
    else
      throw std::logic_error("fold_steps: step outside window");
  }
  return ctx.rename(t, m);
}

// Lemma from core parts spanning steps j and j+1.
ATerm window_lemma(AbstractSystem& sys, const std::vector<const TracePart*>& core, unsigned j) {
  std::vector<ATerm> conj;
  for (const TracePart* p : core) conj.push_back(fold_steps(sys, p->abstract, j));
  return sys.ctx->mk_not(sys.ctx->mk_and(conj));
}

std::vector<const TracePart*> pick(const std::vector<TracePart>& parts,
                                   const std::vector<std::size_t>& idx) {
  std::vector<const TracePart*> out;
  for (std::size_t i : idx) out.push_back(&parts[i]);
  return out;
}

// Index window [lo, hi] of steps a core part touches.
std::pair<unsigned, unsigned> span(const TracePart& p) {
  return {p.step, p.kind == TracePart::Kind::Trans ? p.step + 1 : p.step};
}

}  // namespace

ConcreteTrace extract_witness(const AbstractSystem& sys, std::size_t steps,
                              const std::map<Term, std::uint64_t, TermIdLess>& model) {
  const TransitionSystem& ts = *sys.concrete;
  ConcreteTrace trace(steps);
  auto value = [&](Term v, unsigned i) -> std::uint64_t {
    auto it = model.find(timed_var(*ts.tm, v, i));
    return it == model.end() ? 0 : it->second;
  };
  for (std::size_t i = 0; i < steps; ++i) {
    for (Term v : ts.state_vars) trace[i].state[v] = value(v, static_cast<unsigned>(i));
    for (Term v : ts.input_vars) trace[i].inputs[v] = value(v, static_cast<unsigned>(i));
  }
  return trace;
}

Refinement dp_refine(AbstractSystem& sys, const AbstractTrace& acex, bool minimize,
                     const BvOptions& bv) {
  const auto parts = concretize_parts(sys, acex);
  TermManager& tm = *sys.concrete->tm;
  std::vector<Term> assumps;
  for (const auto& p : parts) assumps.push_back(p.concrete);
  if (bv_check(tm.mk_and(assumps), bv).sat)
    throw NotSpurious("abstract trace is concretely feasible");
  Refinement out;
  // Most local explanation first: single states from the bad end, then
  // single transitions.
  const unsigned last = static_cast<unsigned>(acex.steps.size() - 1);
  std::vector<std::pair<unsigned, unsigned>> windows;
  for (unsigned j = last + 1; j-- > 0;) windows.emplace_back(j, j);
  for (unsigned j = last; j-- > 0;) windows.emplace_back(j, j + 1);
  for (const auto& [lo, hi] : windows) {
    std::vector<std::size_t> idx;
    std::vector<Term> sub;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto [a, b] = span(parts[i]);
      if (a >= lo && b <= hi) {
        idx.push_back(i);
        sub.push_back(parts[i].concrete);
      }
    }
    if (sub.empty() || bv_check(tm.mk_and(sub), bv).sat) continue;
    std::vector<std::size_t> chosen;
    for (std::size_t k : bv_unsat_core(tm.mk_true(), sub, minimize, bv)) chosen.push_back(idx[k]);
    out.lemmas.push_back(window_lemma(sys, pick(parts, chosen), lo));
    return out;
  }
  // No local explanation: add state values of the longest feasible prefix
  // as constants so later cubes can tell these states apart.
  std::map<Term, std::uint64_t, TermIdLess> model;
  for (unsigned m = 0; m <= last; ++m) {
    std::vector<Term> sub;
    for (const auto& p : parts)
      if (span(p).second <= m && p.kind != TracePart::Kind::Bad) sub.push_back(p.concrete);
    const auto r = bv_check(tm.mk_and(sub), bv);
    if (!r.sat) break;
    model = r.model;
  }
  for (const auto& [v, val] : model) {
    if (v->sort.is_bool() || v->role == VarRole::Input) continue;
    out.constants.push_back(sys.ctx->mk_const(val, v->sort.width));
  }
  return out;
}

Verdict dp_ic3(const TransitionSystem& ts, const CegarConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  v.system = std::make_shared<AbstractSystem>(dp_abstract(ts));
  AbstractSystem& sys = *v.system;
  Ic3Config icfg;
  icfg.propagation = cfg.propagation;
  icfg.prop_bound = cfg.prop_bound;
  icfg.max_frames = cfg.max_frames;
  icfg.max_obligations = cfg.max_obligations;
  icfg.cache_shapes = cfg.cache_shapes;
  icfg.euf = cfg.euf;
  auto finish = [&]() {
    v.stats.dpl_count = v.lemmas.dpl().size();
    v.stats.drl_count = v.lemmas.drl().size();
    v.stats.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return std::move(v);
  };
  try {
    for (;;) {
      Ic3Stats st;
      const Ic3Result r = ic3_check(sys, v.lemmas, icfg, &st);
      ++v.stats.ic3_calls;
      v.stats.ic3.frames = std::max(v.stats.ic3.frames, st.frames);
      v.stats.ic3.obligations += st.obligations;
      v.stats.ic3.euf_queries += st.euf_queries;
      v.stats.ic3.queries_skipped_by_propagation += st.queries_skipped_by_propagation;
      v.stats.ic3.propagation_calls += st.propagation_calls;
      v.stats.ic3.propagation_cache_hits += st.propagation_cache_hits;
      if (r.safe) {
        if (!verify_invariant(sys, v.lemmas, r.invariant, cfg.euf)) {
          v.reason = "invariant certificate failed";
          return finish();
        }
        v.kind = VerdictKind::Safe;
        v.invariant = r.invariant;
        return finish();
      }
      const Term conc = dp_concrete(sys, r.trace);
      const BvResult feas = bv_check(conc, cfg.bv);
      if (feas.sat) {
        v.witness = extract_witness(sys, r.trace.steps.size(), feas.model);
        if (const std::string err = replay_counterexample(ts, v.witness); !err.empty()) {
          v.reason = "witness does not replay: " + err;
          return finish();
        }
        v.kind = VerdictKind::Unsafe;
        return finish();
      }
      if (static_cast<int>(v.stats.refinements) >= cfg.max_refinements) {
        v.reason = "refinement budget exhausted";
        return finish();
      }
      const Refinement ref = dp_refine(sys, r.trace, cfg.minimize_cores, cfg.bv);
      ++v.stats.refinements;
      bool progress = false;
      for (ATerm l : ref.lemmas) progress |= v.lemmas.add_drl(l, "refine");
      for (ATerm c : ref.constants)
        if (v.lemmas.add_constant(c)) {
          progress = true;
          ++v.stats.refinement_constants;
        }
      if (!progress) {
        v.reason = "refinement made no progress";
        return finish();
      }
    }
  } catch (const ResourceLimit& e) {
    v.reason = e.what();
  }
  return finish();
}

}  // namespace dpmc
