#include "dpmc/abstraction.hpp"

#include "dpmc/errors.hpp"

namespace dpmc {

Sym AbstractionMap::map_var(Term v) {
  if (auto it = fwd_.find(v); it != fwd_.end()) return it->second;
  Sym s = ctx_->uvar(v->name, v->sort);
  fwd_.emplace(v, s);
  bwd_.emplace(s, v);
  return s;
}

Sym AbstractionMap::symbol_of(Term leaf) const {
  auto it = fwd_.find(leaf);
  if (it == fwd_.end()) throw UnmappedSymbol("no abstract symbol for " + to_string(leaf));
  return it->second;
}

Term AbstractionMap::origin_of(Sym s) const {
  if (s->is_const()) return tm_->mk_const(s->value, s->sort);
  auto it = bwd_.find(s);
  if (it == bwd_.end()) throw UnmappedSymbol("no concrete origin for " + s->name);
  return it->second;
}

bool AbstractionMap::has(Sym s) const { return s->is_const() || s->is_fun() || bwd_.count(s); }

Sym AbstractionMap::primed(Sym v) {
  Term orig = origin_of(v);
  Sym p = ctx_->primed(v);
  if (!bwd_.count(p)) {
    Term c = tm_->mk_var(orig->name + "'", orig->sort, VarRole::Next);
    fwd_.emplace(c, p);
    bwd_.emplace(p, c);
  }
  return p;
}

Sym AbstractionMap::timed(Sym v, unsigned step) {
  Term orig = origin_of(v);
  Sym t = ctx_->timed(v, step);
  if (!bwd_.count(t)) {
    Term c = timed_var(*tm_, orig, step);
    fwd_.emplace(c, t);
    bwd_.emplace(t, c);
  }
  return t;
}

ATerm AbstractionMap::alpha(Term root) {
  for (Term t : topo_order(std::span<const Term>(&root, 1))) {
    if (memo_.count(t)) continue;
    std::vector<ATerm> a;
    for (Term c : t->args) a.push_back(memo_.at(c));
    ATerm r = nullptr;
    switch (t->kind) {
      case NodeKind::Const:
        if (t->sort.is_bool()) {
          r = ctx_->mk_bool(t->value != 0);
        } else {
          Sym s = ctx_->uconst(t->value, t->sort.width);
          fwd_.emplace(t, s);
          r = ctx_->mk_sym(s);
        }
        break;
      case NodeKind::Var: r = ctx_->mk_sym(map_var(t)); break;
      case NodeKind::Op:
        if (t->op == OpKind::Eq)
          r = ctx_->mk_eq(a[0], a[1]);
        else if (t->op == OpKind::Neq)
          r = ctx_->mk_not(ctx_->mk_eq(a[0], a[1]));
        else
          r = ctx_->mk_app(ctx_->ufun(t->op, t->args[0]->sort.width), std::move(a));
        break;
      case NodeKind::Ite: r = ctx_->mk_ite(a[0], a[1], a[2]); break;
      case NodeKind::Not: r = ctx_->mk_not(a[0]); break;
      case NodeKind::And: r = ctx_->mk_and(std::move(a)); break;
      case NodeKind::Or: r = ctx_->mk_or(std::move(a)); break;
    }
    memo_.emplace(t, r);
  }
  return memo_.at(root);
}

Term AbstractionMap::gamma(ATerm root) const {
  std::unordered_map<ATerm, Term> m;
  for (ATerm t : atopo_order({root})) {
    std::vector<Term> a;
    for (ATerm c : t->args) a.push_back(m.at(c));
    Term r = nullptr;
    switch (t->kind) {
      case AKind::True: r = tm_->mk_true(); break;
      case AKind::False: r = tm_->mk_false(); break;
      case AKind::Sym: r = origin_of(t->sym); break;
      case AKind::App: r = tm_->mk_op(t->sym->op, std::move(a)); break;
      case AKind::Ite: r = tm_->mk_ite(a[0], a[1], a[2]); break;
      case AKind::Eq: r = tm_->mk_eq(a[0], a[1]); break;
      case AKind::Not: r = tm_->mk_not(a[0]); break;
      case AKind::And: r = tm_->mk_and(std::move(a)); break;
      case AKind::Or: r = tm_->mk_or(std::move(a)); break;
    }
    m.emplace(t, r);
  }
  return m.at(root);
}

Term timed_var(TermManager& tm, Term v, unsigned step) {
  return tm.mk_var(v->name + "@" + std::to_string(step), v->sort, v->role);
}

// ---------------------------------------------------------------------------

ATerm AbstractSystem::prime(ATerm t) const { return ctx->rename(t, prime_map); }

ATerm AbstractSystem::unprime(ATerm t) const { return ctx->rename(t, unprime_map); }

ATerm AbstractSystem::at_step(ATerm t, unsigned i) const {
  std::unordered_map<Sym, Sym> m;
  for (Sym s : symb(t)) {
    if (!s->is_var()) continue;
    if (auto it = unprime_map.find(s); it != unprime_map.end())
      m.emplace(s, map->timed(it->second, i + 1));
    else if (map->has(s) && s->name.find('@') == std::string::npos)
      m.emplace(s, map->timed(s, i));
  }
  return ctx->rename(t, m);
}

AbstractSystem dp_abstract(const TransitionSystem& ts) {
  AbstractSystem sys;
  sys.ctx = std::make_shared<AbstractContext>();
  sys.map = std::make_shared<AbstractionMap>(ts.tm, sys.ctx);
  sys.concrete = &ts;
  auto& m = *sys.map;
  for (Term v : ts.state_vars) sys.state_vars.push_back(m.map_var(v));
  for (Term v : ts.input_vars) sys.input_vars.push_back(m.map_var(v));
  for (auto* vs : {&sys.state_vars, &sys.input_vars})
    for (Sym v : *vs) {
      Sym p = m.primed(v);
      sys.prime_map.emplace(v, p);
      sys.unprime_map.emplace(p, v);
    }
  sys.init = m.alpha(ts.init);
  std::vector<ATerm> eqs;
  for (std::size_t i = 0; i < ts.state_vars.size(); ++i) {
    Sym v = sys.state_vars[i];
    ATerm rhs = m.alpha(ts.next.at(ts.state_vars[i]));
    ATerm eq = sys.ctx->mk_eq(sys.ctx->mk_sym(sys.prime_map.at(v)), rhs);
    sys.next.emplace(v, eq);
    eqs.push_back(eq);
  }
  sys.trans = sys.ctx->mk_and(std::move(eqs));
  sys.prop = m.alpha(ts.property);
  sys.prop_next = sys.prime(sys.prop);
  return sys;
}

std::vector<TracePart> concretize_parts(const AbstractSystem& sys,
                                        const AbstractTrace& trace) {
  std::vector<TracePart> parts;
  if (trace.steps.empty()) return parts;
  auto& ctx = *sys.ctx;
  auto add = [&](TracePart::Kind k, unsigned step, ATerm t) {
    ATerm a = sys.at_step(t, step);
    parts.push_back(TracePart{k, step, a, sys.map->gamma(a)});
  };
  add(TracePart::Kind::Init, 0, sys.init);
  const unsigned last = static_cast<unsigned>(trace.steps.size() - 1);
  for (unsigned i = 0; i <= last; ++i) {
    for (const ALit& l : trace.steps[i].lits) add(TracePart::Kind::Lit, i, lit_term(ctx, l));
    if (i < last)
      for (const ALit& l : trace.steps[i].trans)
        add(TracePart::Kind::Trans, i, lit_term(ctx, l));
  }
  for (const ALit& l : trace.bad) add(TracePart::Kind::Bad, last, lit_term(ctx, l));
  return parts;
}

Term dp_concrete(const AbstractSystem& sys, const AbstractTrace& trace) {
  std::vector<Term> cs;
  for (const auto& p : concretize_parts(sys, trace)) cs.push_back(p.concrete);
  return sys.map->tm().mk_and(std::move(cs));
}

}  // namespace dpmc
