#include "dpmc/ic3.hpp"

#include <algorithm>
#include <queue>

#include "dpmc/errors.hpp"
#include "dpmc/propagation.hpp"

namespace dpmc {

namespace {

AClause negate(const std::vector<ALit>& cube) {
  AClause c;
  for (const ALit& l : cube) c.push_back(~l);
  std::sort(c.begin(), c.end());
  return c;
}

bool subsumes(const AClause& small, const AClause& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<ALit> prime_lits(AbstractSystem& sys, const std::vector<ALit>& lits) {
  std::vector<ALit> out;
  for (const ALit& l : lits) out.push_back({sys.prime(l.atom), l.neg});
  return out;
}

}  // namespace

std::vector<ATerm> lemma_instances(AbstractSystem& sys, const LemmaStore& lemmas, bool drl_only) {
  std::vector<ATerm> out;
  std::unordered_set<ATerm> seen;
  auto add = [&](ATerm t) {
    if (seen.insert(t).second) out.push_back(t);
  };
  auto inst = [&](const Lemma& l) {
    bool primed = false, current = false;
    for (Sym s : symb(l.formula)) {
      if (!s->is_var()) continue;
      if (sys.ctx->is_primed(s))
        primed = true;
      else if (sys.prime_map.count(s))
        current = true;
    }
    add(l.formula);
    if (!primed) add(sys.prime(l.formula));
    if (primed && !current) add(sys.unprime(l.formula));
  };
  for (const auto& l : lemmas.drl()) inst(l);
  if (!drl_only)
    for (const auto& l : lemmas.dpl()) inst(l);
  return out;
}

Ic3::Ic3(AbstractSystem& sys, LemmaStore& lemmas, Ic3Config cfg, Ic3Stats& stats)
    : sys_(sys), ctx_(*sys.ctx), lemmas_(lemmas), cfg_(std::move(cfg)), stats_(stats) {
  for (Sym s : sys_.state_vars) state_terms_.push_back(ctx_.mk_sym(s));
  std::vector<ATerm> roots{sys_.init, sys_.trans, sys_.prop};
  for (const auto& l : lemmas_.drl()) roots.push_back(l.formula);
  SymSet cs;
  for (ATerm r : roots) collect_symbols(r, cs);
  std::vector<Sym> sorted;
  for (ATerm c : lemmas_.constants()) cs.insert(c->sym);
  for (Sym s : cs)
    if (s->is_const()) sorted.push_back(s);
  std::sort(sorted.begin(), sorted.end(), SymLess{});
  for (Sym s : sorted) consts_.push_back(ctx_.mk_sym(s));
  // Predicate atoms over current-state symbols and constants.
  std::unordered_set<Sym> state_set(sys_.state_vars.begin(), sys_.state_vars.end());
  for (ATerm t : atopo_order(roots)) {
    if (t->kind != AKind::App || !t->is_bool()) continue;
    bool ok = true;
    for (Sym s : symb(t))
      if (s->is_var() && !state_set.count(s)) ok = false;
    if (ok) state_preds_.push_back(t);
  }
}

void Ic3::add_lemma_instances(AbstractFormula& f, bool drl_only) {
  for (ATerm t : lemma_instances(sys_, lemmas_, drl_only)) f.add_unit(t);
}

Ic3::Outcome Ic3::query(const AbstractFormula& phi, const std::vector<ATerm>& assumptions) {
  Outcome out;
  if (cfg_.propagation) {
    std::vector<std::uint32_t> shape;
    for (const auto& c : phi.clauses) {
      for (const auto& l : c) shape.push_back(l.atom->id * 2 + (l.neg ? 1 : 0));
      shape.push_back(0);
    }
    for (ATerm a : assumptions) shape.push_back(a->id * 2);
    if (cfg_.cache_shapes && barren_shapes_.count(shape)) {
      ++stats_.propagation_cache_hits;
    } else {
      AbstractFormula f = phi;
      for (ATerm a : assumptions) f.add_unit(a);
      add_lemma_instances(f, true);
      ++stats_.propagation_calls;
      const std::size_t before = lemmas_.dpl().size();
      const PropVerdict v = propagate(ctx_, f, cfg_.prop_bound, lemmas_);
      if (v == PropVerdict::Unsat) {
        ++stats_.queries_skipped_by_propagation;
        for (std::size_t i = 0; i < assumptions.size(); ++i) out.core.push_back(i);
        return out;
      }
      if (lemmas_.dpl().size() == before) barren_shapes_.insert(std::move(shape));
    }
  }
  EufQuery q;
  q.phi = phi;
  add_lemma_instances(q.phi);
  q.assumptions = assumptions;
  q.observe = state_terms_;
  q.observe.insert(q.observe.end(), consts_.begin(), consts_.end());
  q.observe.insert(q.observe.end(), state_preds_.begin(), state_preds_.end());
  ++stats_.euf_queries;
  EufResult r = euf_check(ctx_, q, cfg_.euf);
  out.sat = r.sat;
  out.model = std::move(r.model);
  out.core = std::move(r.core);
  return out;
}

std::vector<ALit> Ic3::extract_cube(const EufModel& m) {
  std::vector<ALit> cube;
  for (std::size_t i = 0; i < state_terms_.size(); ++i) {
    ATerm x = state_terms_[i];
    if (x->is_bool()) {
      cube.push_back({x, !m.value(x)});
      continue;
    }
    ATerm k = m.const_of(x);
    if (k) {
      cube.push_back({ctx_.mk_eq(x, k), false});
    } else {
      for (ATerm c : consts_)
        if (c->sort == x->sort) cube.push_back({ctx_.mk_eq(x, c), true});
    }
    for (std::size_t j = i + 1; j < state_terms_.size(); ++j) {
      ATerm y = state_terms_[j];
      if (y->sort != x->sort) continue;
      if (k && m.const_of(y) == k) continue;  // implied by the constant literals
      ATerm e = ctx_.mk_eq(x, y);
      if (e->kind == AKind::Eq) cube.push_back({e, !m.same_class(x, y)});
    }
  }
  for (ATerm p : state_preds_) cube.push_back({p, !m.value(p)});
  std::sort(cube.begin(), cube.end());
  cube.erase(std::unique(cube.begin(), cube.end()), cube.end());
  return cube;
}

std::vector<ALit> Ic3::path_trans(const EufModel& m) {
  std::vector<ALit> out;
  std::unordered_map<ATerm, ATerm> memo;
  std::function<ATerm(ATerm)> simp = [&](ATerm t) -> ATerm {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    ATerm r = t;
    if (t->kind == AKind::Ite && !t->is_bool()) {
      const bool g = m.value(t->args[0]);
      out.push_back({t->args[0], !g});
      r = simp(t->args[g ? 1 : 2]);
    } else if (!t->args.empty()) {
      std::vector<ATerm> args;
      bool changed = false;
      for (ATerm a : t->args) {
        args.push_back(simp(a));
        changed |= args.back() != a;
      }
      if (changed) {
        switch (t->kind) {
          case AKind::App: r = ctx_.mk_app(t->sym, std::move(args)); break;
          case AKind::Eq: r = ctx_.mk_eq(args[0], args[1]); break;
          case AKind::Not: r = ctx_.mk_not(args[0]); break;
          case AKind::And: r = ctx_.mk_and(std::move(args)); break;
          case AKind::Or: r = ctx_.mk_or(std::move(args)); break;
          default: break;
        }
      }
    }
    memo.emplace(t, r);
    return r;
  };
  for (const auto& [x, eq] : sys_.next) out.push_back({simp(eq), false});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AbstractFormula Ic3::frame(int i) const {
  AbstractFormula f;
  if (i == 0) {
    f.add_unit(sys_.init);
    return f;
  }
  f.add_unit(sys_.prop);
  for (std::size_t j = static_cast<std::size_t>(i); j < levels_.size(); ++j)
    for (const auto& c : levels_[j]) f.add(c);
  return f;
}

bool Ic3::relative_inductive(const std::vector<ALit>& cube, int frame, Outcome* out) {
  AbstractFormula phi = this->frame(frame - 1);
  phi.add(negate(cube));
  phi.add_unit(sys_.trans);
  std::vector<ATerm> assumps;
  for (const ALit& l : prime_lits(sys_, cube)) assumps.push_back(lit_term(ctx_, l));
  Outcome o = query(phi, assumps);
  const bool ok = !o.sat;
  if (out) *out = std::move(o);
  return ok;
}

bool Ic3::intersects_init(const std::vector<ALit>& cube) {
  AbstractFormula phi;
  phi.add_unit(sys_.init);
  std::vector<ATerm> assumps;
  for (const ALit& l : cube) assumps.push_back(lit_term(ctx_, l));
  return query(phi, assumps).sat;
}

std::vector<ALit> Ic3::generalize(const std::vector<ALit>& cube, int frame,
                                  const std::vector<std::size_t>& core) {
  std::vector<ALit> c = cube;
  if (!core.empty() && core.size() < cube.size()) {
    std::vector<ALit> reduced;
    for (std::size_t i : core) reduced.push_back(cube[i]);
    if (!intersects_init(reduced)) c = std::move(reduced);
  }
  for (std::size_t i = 0; i < c.size() && c.size() > 1;) {
    std::vector<ALit> cand = c;
    cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(i));
    Outcome o;
    if (!intersects_init(cand) && relative_inductive(cand, frame, &o)) {
      c = std::move(cand);
    } else {
      ++i;
    }
  }
  return c;
}

void Ic3::add_blocked(const std::vector<ALit>& cube, int frame) {
  AClause cl = negate(cube);
  for (int j = 1; j <= frame; ++j) {
    auto& lv = levels_[j];
    lv.erase(std::remove_if(lv.begin(), lv.end(),
                            [&](const AClause& old) { return subsumes(cl, old); }),
             lv.end());
  }
  levels_[frame].push_back(std::move(cl));
}

AbstractTrace Ic3::build_trace(const std::vector<Obligation>& obs, int leaf,
                               const std::vector<ALit>& bad) {
  AbstractTrace t;
  for (int i = leaf; i >= 0; i = obs[i].parent) t.steps.push_back({obs[i].cube, obs[i].trans});
  t.steps.push_back({});
  t.bad = bad;
  return t;
}

bool Ic3::block(std::vector<ALit> bad_cube, int k, AbstractTrace& trace) {
  // Root obligation; its transition literals are filled in by the caller.
  std::vector<Obligation> obs;
  obs.push_back({std::move(bad_cube), k, 0, -1, {}});
  std::swap(obs[0].trans, pending_trans_);
  auto later = [&](int a, int b) {
    if (obs[a].frame != obs[b].frame) return obs[a].frame > obs[b].frame;
    return obs[a].depth < obs[b].depth;
  };
  std::priority_queue<int, std::vector<int>, decltype(later)> heap(later);
  heap.push(0);
  while (!heap.empty()) {
    const int idx = heap.top();
    if (cfg_.max_obligations >= 0 &&
        static_cast<std::int64_t>(++stats_.obligations) > cfg_.max_obligations)
      throw ResourceLimit("IC3 obligation budget exhausted");
    if (obs[idx].frame == 0 || intersects_init(obs[idx].cube)) {
      trace = build_trace(obs, idx, {ALit{sys_.prop, true}});
      return false;
    }
    const AClause neg = negate(obs[idx].cube);
    bool blocked = false;
    for (std::size_t j = static_cast<std::size_t>(obs[idx].frame); j < levels_.size() && !blocked; ++j)
      for (const auto& c : levels_[j])
        if (subsumes(c, neg)) {
          blocked = true;
          break;
        }
    if (blocked) {
      heap.pop();
      continue;
    }
    Outcome o;
    if (relative_inductive(obs[idx].cube, obs[idx].frame, &o)) {
      heap.pop();
      const auto g = generalize(obs[idx].cube, obs[idx].frame, o.core);
      add_blocked(g, obs[idx].frame);
      continue;
    }
    Obligation pred{extract_cube(o.model), obs[idx].frame - 1, obs[idx].depth + 1, idx,
                    path_trans(o.model)};
    obs.push_back(std::move(pred));
    heap.push(static_cast<int>(obs.size() - 1));
  }
  return true;
}

int Ic3::push_clauses(int k) {
  for (int i = 1; i <= k; ++i) {
    std::vector<AClause> keep;
    for (const AClause& cl : levels_[i]) {
      AbstractFormula phi = frame(i);
      phi.add_unit(sys_.trans);
      std::vector<ATerm> assumps;
      for (const ALit& l : cl) assumps.push_back(lit_term(ctx_, ALit{sys_.prime(l.atom), !l.neg}));
      if (!query(phi, assumps).sat)
        levels_[i + 1].push_back(cl);
      else
        keep.push_back(cl);
    }
    levels_[i] = std::move(keep);
    if (levels_[i].empty()) return i;
  }
  return -1;
}

Ic3Result Ic3::check() {
  Ic3Result res;
  {
    AbstractFormula phi = frame(0);
    Outcome o = query(phi, {ctx_.mk_not(sys_.prop)});
    if (o.sat) {
      res.trace.steps.push_back({extract_cube(o.model), {}});
      res.trace.bad = {ALit{sys_.prop, true}};
      return res;
    }
  }
  levels_.assign(3, {});
  stats_.frames = 1;
  for (int k = 1;; ++k) {
    for (;;) {
      AbstractFormula phi = frame(k);
      phi.add_unit(sys_.trans);
      Outcome o = query(phi, {ctx_.mk_not(sys_.prop_next)});
      if (!o.sat) break;
      pending_trans_ = path_trans(o.model);
      if (!block(extract_cube(o.model), k, res.trace)) return res;
    }
    if (k >= cfg_.max_frames) throw ResourceLimit("IC3 frame budget exhausted");
    levels_.emplace_back();
    ++stats_.frames;
    if (const int i = push_clauses(k); i > 0) {
      res.safe = true;
      res.invariant = frame(i);
      return res;
    }
  }
}

Ic3Result ic3_check(AbstractSystem& sys, LemmaStore& lemmas, const Ic3Config& cfg,
                    Ic3Stats* stats) {
  Ic3Stats local;
  Ic3 engine(sys, lemmas, cfg, stats ? *stats : local);
  return engine.check();
}

bool verify_invariant(AbstractSystem& sys, const LemmaStore& lemmas, const AbstractFormula& inv,
                      const EufOptions& opts) {
  AbstractContext& ctx = *sys.ctx;
  const auto lem = lemma_instances(sys, lemmas);
  ATerm inv_t = inv.to_term(ctx);
  auto unsat = [&](std::vector<ATerm> parts) {
    AbstractFormula f;
    for (ATerm t : parts) f.add_unit(t);
    for (ATerm t : lem) f.add_unit(t);
    EufQuery q;
    q.phi = std::move(f);
    return !euf_check(ctx, q, opts).sat;
  };
  return unsat({sys.init, ctx.mk_not(inv_t)}) &&
         unsat({inv_t, sys.trans, ctx.mk_not(sys.prime(inv_t))}) &&
         unsat({inv_t, ctx.mk_not(sys.prop)});
}

}  // namespace dpmc
