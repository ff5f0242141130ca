#include "dpmc/propagation.hpp"

#include <algorithm>
#include <deque>

#include "dpmc/rules.hpp"

namespace dpmc {

namespace {

std::string_view kind_name(PropEvent::Kind k) {
  switch (k) {
    case PropEvent::Kind::Touch: return "touch";
    case PropEvent::Kind::GroundEval: return "ground";
    case PropEvent::Kind::Rewrite: return "rewrite";
    case PropEvent::Kind::Assert: return "assert";
    case PropEvent::Kind::IteCollapse: return "ite";
    case PropEvent::Kind::Contradiction: return "contradiction";
    case PropEvent::Kind::Lemma: return "lemma";
  }
  return "?";
}

bool is_pred(ATerm t) { return t->kind == AKind::App && t->is_bool(); }

std::uint64_t mask(unsigned w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

}  // namespace

std::string to_string(const PropEvent& e) {
  std::string s(kind_name(e.kind));
  if (!e.rule.empty()) s += " [" + e.rule + "]";
  if (!e.text.empty()) s += " " + e.text;
  return s;
}

Propagator::Propagator(AbstractContext& ctx, const AbstractFormula& phi, PropOptions opts)
    : ctx_(ctx), opts_(opts), cc_(ctx) {
  std::vector<ATerm> roots;
  for (const auto& c : phi.clauses)
    for (const auto& l : c) roots.push_back(l.atom);
  for (ATerm t : atopo_order(roots)) {
    if (t->kind == AKind::App) {
      apps_.push_back(t);
      app_set_.insert(t);
      cc_.add(t);
    } else if (t->kind == AKind::Ite && !t->is_bool()) {
      ites_.push_back(t);
      cc_.add(t);
    } else if (t->kind == AKind::Sym && !t->is_bool()) {
      cc_.add(t);
    }
  }
  std::vector<Sym> cs;
  for (Sym s : symb(phi))
    if (s->is_const()) cs.push_back(s);
  std::sort(cs.begin(), cs.end(), SymLess{});
  for (Sym s : cs) {
    ATerm c = ctx_.mk_sym(s);
    consts_.push_back(c);
    const_by_value_.emplace(std::make_pair(s->value, s->sort.width), c);
  }
  for (const auto& c : phi.clauses) {
    if (c.empty()) {
      fail("empty clause");
    } else if (c.size() == 1) {
      assert_term(c[0].atom, !c[0].neg);
    } else {
      clauses_.push_back(c);
    }
  }
}

void Propagator::event(PropEvent::Kind k, std::string rule, std::string text, ATerm subject) {
  if (!opts_.record_events) return;
  events_.push_back({k, std::move(rule), std::move(text), subject});
}

void Propagator::fail(std::string why) {
  if (failed_) return;
  failed_ = true;
  event(PropEvent::Kind::Contradiction, "", std::move(why), nullptr);
}

void Propagator::emit(const std::string& rule, ATerm lemma) {
  if (lemma->kind == AKind::True) return;
  if (!psi_seen_.insert(lemma).second) return;
  psi_.push_back({lemma, rule});
  ++changes_;
  if (opts_.record_events) event(PropEvent::Kind::Lemma, rule, to_string(lemma), lemma);
}

ATerm Propagator::formula_const(std::uint64_t v, unsigned width) const {
  auto it = const_by_value_.find({v, width});
  return it == const_by_value_.end() ? nullptr : it->second;
}

int Propagator::value(ATerm t) {
  switch (t->kind) {
    case AKind::True: return 1;
    case AKind::False: return 0;
    case AKind::Sym: {
      auto it = props_.find(t);
      return it == props_.end() ? -1 : it->second;
    }
    case AKind::Eq:
      if (cc_.equal(t->args[0], t->args[1])) return 1;
      return cc_.known_diseq(t->args[0], t->args[1]) ? 0 : -1;
    case AKind::App:
      if (!t->is_bool()) return -1;
      if (cc_.equal(t, ctx_.mk_true())) return 1;
      if (cc_.equal(t, ctx_.mk_false())) return 0;
      return -1;
    case AKind::Not: {
      const int v = value(t->args[0]);
      return v < 0 ? -1 : 1 - v;
    }
    case AKind::And:
    case AKind::Or: {
      const int absorb = t->kind == AKind::And ? 0 : 1;
      bool unknown = false;
      for (ATerm a : t->args) {
        const int v = value(a);
        if (v == absorb) return absorb;
        if (v < 0) unknown = true;
      }
      return unknown ? -1 : 1 - absorb;
    }
    case AKind::Ite: break;
  }
  return -1;
}

void Propagator::assert_term(ATerm t, bool val) {
  auto& seen = val ? asserted_true_ : asserted_false_;
  if (!seen.insert(t).second) return;
  ++changes_;
  switch (t->kind) {
    case AKind::True:
      if (!val) fail("false asserted");
      return;
    case AKind::False:
      if (val) fail("false asserted");
      return;
    case AKind::Sym: {
      auto [it, ins] = props_.emplace(t, val);
      if (!ins && it->second != val) fail("proposition " + to_string(t));
      return;
    }
    case AKind::Eq:
      if (val)
        cc_.merge(t->args[0], t->args[1], 0);
      else
        cc_.assert_diseq(t->args[0], t->args[1], 0);
      return;
    case AKind::App:
      cc_.merge(t, ctx_.mk_bool(val), 0);
      return;
    case AKind::Not:
      assert_term(t->args[0], !val);
      return;
    case AKind::And:
    case AKind::Or: {
      const bool split = (t->kind == AKind::And) == val;
      if (split) {
        for (ATerm a : t->args) assert_term(a, val);
      } else {
        AClause c;
        for (ATerm a : t->args) c.push_back(ALit{a, !val});
        clauses_.push_back(std::move(c));
      }
      return;
    }
    case AKind::Ite: break;
  }
}

bool Propagator::contradiction() {
  if (failed_) return true;
  if (cc_.inconsistent() || !cc_.check()) {
    fail("closure conflict");
    return true;
  }
  return false;
}

bool Propagator::is_ground(ATerm app) {
  for (ATerm a : app->args)
    if (!cc_.const_of(a)) return false;
  return true;
}

ATerm Propagator::substituted(ATerm app) {
  std::vector<ATerm> args;
  for (ATerm a : app->args) {
    ATerm c = cc_.const_of(a);
    args.push_back(c ? c : a);
  }
  return ctx_.mk_app(app->sym, std::move(args));
}

void Propagator::ground_eval(ATerm app) {
  if (!evaluated_.insert(app).second) return;
  ATerm s = substituted(app);
  cc_.add(s);
  const OpKind op = app->sym->op;
  const unsigned w = app->sym->arg_width;
  const std::uint64_t a = s->args[0]->sym->value;
  const std::uint64_t b = s->args.size() > 1 ? s->args[1]->sym->value : 0;
  const std::uint64_t res = apply_op(op, w, a, b);
  event(PropEvent::Kind::GroundEval, "", opts_.record_events ? to_string(s) + " = " + std::to_string(res) : "", app);
  if (is_pred(app)) {
    const auto& table = RuleTable::instance();
    if (app->args[0] != app->args[1] && cc_.equal(app->args[0], app->args[1])) {
      ATerm eq = ctx_.mk_eq(app->args[0], app->args[1]);
      if (op == OpKind::Ule && table.enabled("R04"))
        emit("R04", ctx_.mk_implies(eq, app));
      else if (op == OpKind::Ult && table.enabled("R01"))
        emit("R01", ctx_.mk_implies(eq, ctx_.mk_not(app)));
    }
    emit("GE", res ? s : ctx_.mk_not(s));
    cc_.merge(app, ctx_.mk_bool(res != 0), 0);
    ++changes_;
    return;
  }
  const unsigned rw = app->sort.width;
  if (ATerm r = formula_const(res, rw)) {
    emit("GE", ctx_.mk_eq(s, r));
    cc_.merge(app, r, 0);
    ++changes_;
    return;
  }
  for (ATerm c : consts_) {
    if (c->sort.width != rw || c->sort.is_bool()) continue;
    emit("GE", ctx_.mk_not(ctx_.mk_eq(s, c)));
    cc_.assert_diseq(app, c, 0);
  }
}

bool Propagator::local_rules(ATerm app) {
  const auto& rules = RuleTable::instance().local_rules(app->sym->op);
  const unsigned w = app->sym->arg_width;
  auto matches = [&](ArgPat p, ATerm arg) {
    if (p == ArgPat::Any) return true;
    ATerm c = cc_.const_of(arg);
    if (!c) return false;
    const std::uint64_t v = c->sym->value;
    switch (p) {
      case ArgPat::Zero: return v == 0;
      case ArgPat::One: return v == 1;
      case ArgPat::Max: return v == mask(w);
      case ArgPat::Any: break;
    }
    return true;
  };
  for (const RuleDesc* r : rules) {
    if (r->only_width != 0 && r->only_width != w) continue;
    if (!matches(r->a0, app->args[0])) continue;
    if (app->args.size() > 1 && !matches(r->a1, app->args[1])) continue;
    if (r->args_equal && !cc_.equal(app->args[0], app->args[1])) continue;
    ATerm side_const = nullptr;
    ATerm side_arg = nullptr;
    switch (r->side) {
      case SideCond::None: break;
      case SideCond::Arg0NeZero: side_const = formula_const(0, w), side_arg = app->args[0]; break;
      case SideCond::Arg0NeMax: side_const = formula_const(mask(w), w), side_arg = app->args[0]; break;
      case SideCond::Arg1NeZero: side_const = formula_const(0, w), side_arg = app->args[1]; break;
    }
    if (r->side != SideCond::None && (!side_const || !cc_.known_diseq(side_arg, side_const)))
      continue;

    ATerm s = substituted(app);
    const unsigned rw = app->is_bool() ? 1 : app->sort.width;
    ATerm target = nullptr;
    switch (r->concl) {
      case Conclusion::EqArg0: target = s->args[0]; break;
      case Conclusion::EqArg1: target = s->args[1]; break;
      case Conclusion::EqZero: target = formula_const(0, rw); break;
      case Conclusion::EqOne: target = formula_const(1, rw); break;
      case Conclusion::EqMax: target = formula_const(mask(rw), rw); break;
      case Conclusion::PredTrue: target = ctx_.mk_true(); break;
      case Conclusion::PredFalse: target = ctx_.mk_false(); break;
      case Conclusion::Relational: break;
    }
    if (!target) continue;
    if (!fired_.insert({r->id, app}).second) continue;

    std::vector<ATerm> premises;
    if (r->args_equal) premises.push_back(ctx_.mk_eq(s->args[0], s->args[1]));
    if (side_arg) {
      const std::size_t i = r->side == SideCond::Arg1NeZero ? 1 : 0;
      premises.push_back(ctx_.mk_not(ctx_.mk_eq(s->args[i], side_const)));
    }
    ATerm concl = app->is_bool() ? (target->kind == AKind::True ? s : ctx_.mk_not(s))
                                 : ctx_.mk_eq(s, target);
    emit(r->id, premises.empty() ? concl : ctx_.mk_implies(ctx_.mk_and(premises), concl));
    event(app->is_bool() ? PropEvent::Kind::Assert : PropEvent::Kind::Rewrite, r->id,
          opts_.record_events ? to_string(app) + " -> " + to_string(target) : "", app);
    cc_.add(s);
    cc_.merge(app, target, 0);
    ++changes_;
    return true;
  }
  return false;
}

void Propagator::process(ATerm app, bool cascade_args) {
  if (cascade_args) {
    for (ATerm a : app->args)
      for (ATerm m : cc_.members(a)) {
        if (m == app || m->kind != AKind::App || !app_set_.count(m)) continue;
        if (is_ground(m))
          ground_eval(m);
        else
          local_rules(m);
        if (contradiction()) return;
      }
  }
  if (is_ground(app))
    ground_eval(app);
  else
    local_rules(app);
}

std::vector<ATerm> Propagator::update_related_uf(ATerm c) {
  std::vector<ATerm> touched;
  if (!cc_.has(c)) return touched;
  std::unordered_set<ATerm> seen;
  for (bool grew = true; grew && !contradiction();) {
    grew = false;
    for (ATerm app : apps_) {
      if (seen.count(app)) continue;
      bool related = false;
      std::vector<ATerm> args;
      for (ATerm a : app->args) {
        const bool in = cc_.equal(a, c);
        related |= in;
        args.push_back(in ? c : a);
      }
      if (!related) continue;
      seen.insert(app);
      grew = true;
      ATerm t = ctx_.mk_app(app->sym, std::move(args));
      touched.push_back(t);
      if (opts_.record_events) event(PropEvent::Kind::Touch, "", to_string(t), t);
      process(app, true);
      if (contradiction()) break;
    }
  }
  return touched;
}

namespace {

struct OrderEdge {
  int from, to;
  bool strict;
  ATerm lit;
  ATerm ft, tt;  // terms at the endpoints
};

struct OrderPath {
  bool found = false;
  bool strict = false;
  std::vector<std::size_t> edges;
};

// Shortest path preferring strict ones; states are (class, strict so far).
OrderPath find_path(const std::vector<OrderEdge>& edges, int from, int to) {
  std::map<std::pair<int, bool>, std::pair<std::pair<int, bool>, std::size_t>> parent;
  std::deque<std::pair<int, bool>> queue{{from, false}};
  parent[{from, false}] = {{from, false}, SIZE_MAX};
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].from != cur.first) continue;
      const std::pair<int, bool> nxt{edges[i].to, cur.second || edges[i].strict};
      if (parent.count(nxt)) continue;
      parent[nxt] = {cur, i};
      queue.push_back(nxt);
    }
  }
  OrderPath p;
  for (bool strict : {true, false}) {
    auto it = parent.find({to, strict});
    if (it == parent.end() || (to == from && !strict)) continue;
    p.found = true;
    p.strict = strict;
    for (auto st = it->first;;) {
      const auto& [prev, e] = parent.at(st);
      if (e == SIZE_MAX) break;
      p.edges.push_back(e);
      st = prev;
    }
    std::reverse(p.edges.begin(), p.edges.end());
    return p;
  }
  return p;
}

}  // namespace

bool Propagator::relgraph() {
  std::vector<OrderEdge> edges;
  std::vector<ATerm> open;
  for (ATerm app : apps_) {
    const OpKind op = app->sym->op;
    if (op != OpKind::Ult && op != OpKind::Ule) continue;
    const int v = value(app);
    if (v < 0) {
      open.push_back(app);
      continue;
    }
    ATerm a = app->args[0], b = app->args[1];
    const bool lt = op == OpKind::Ult;
    if (v == 1)
      edges.push_back({cc_.find(a), cc_.find(b), lt, app, a, b});
    else
      edges.push_back({cc_.find(b), cc_.find(a), !lt, ctx_.mk_not(app), b, a});
  }
  if (edges.empty()) return false;

  auto premises = [&](const OrderPath& p, ATerm from, ATerm to) {
    std::vector<ATerm> out;
    ATerm at = from;
    for (std::size_t i : p.edges) {
      out.push_back(ctx_.mk_eq(at, edges[i].ft));
      out.push_back(edges[i].lit);
      at = edges[i].tt;
    }
    out.push_back(ctx_.mk_eq(at, to));
    return out;
  };

  // Strict cycles are contradictions.
  for (const auto& e : edges) {
    if (!e.strict) continue;
    std::vector<ATerm> ps{e.lit};
    if (e.from == e.to) {
      ps.push_back(ctx_.mk_eq(e.ft, e.tt));
    } else {
      const OrderPath back = find_path(edges, e.to, e.from);
      if (!back.found) continue;
      auto more = premises(back, e.tt, e.ft);
      ps.insert(ps.end(), more.begin(), more.end());
    }
    emit("R08", ctx_.mk_not(ctx_.mk_and(ps)));
    fail("strict order cycle");
    return true;
  }

  // Antisymmetry between two non-strict edges.
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto &e1 = edges[i], &e2 = edges[j];
      if (e1.strict || e2.strict || e1.from == e1.to) continue;
      if (e1.from != e2.to || e1.to != e2.from) continue;
      if (!RuleTable::instance().enabled("R17")) continue;
      if (!fired_.insert({"R17", e1.lit}).second) continue;
      ATerm concl = ctx_.mk_eq(e1.ft, e1.tt);
      emit("R17", ctx_.mk_implies(ctx_.mk_and({e1.lit, e2.lit, ctx_.mk_eq(e1.tt, e2.ft),
                                                ctx_.mk_eq(e2.tt, e1.ft)}),
                                  concl));
      event(PropEvent::Kind::Assert, "R17", to_string(concl), concl);
      cc_.merge(e1.ft, e1.tt, 0);
      ++changes_;
      return true;
    }

  for (ATerm app : open) {
    const bool lt = app->sym->op == OpKind::Ult;
    ATerm p = app->args[0], q = app->args[1];
    const int cp = cc_.find(p), cq = cc_.find(q);
    if (cp == cq) continue;
    int verdict = -1;
    OrderPath path;
    ATerm from = p, to = q;
    if (auto fwd = find_path(edges, cp, cq); fwd.found && (fwd.strict || !lt)) {
      verdict = 1;
      path = fwd;
    } else if (auto bwd = find_path(edges, cq, cp); bwd.found && (bwd.strict || lt)) {
      verdict = 0;
      path = bwd;
      from = q;
      to = p;
    }
    if (verdict < 0) continue;
    std::string id;
    if (path.edges.size() == 1) {
      const bool neg_edge = edges[path.edges[0]].lit->kind == AKind::Not;
      if (verdict == 0)
        id = path.strict ? "R06" : "R05";
      else
        id = neg_edge ? (path.strict ? "R16" : "R15") : "R07";
    } else {
      id = verdict == 1 ? (path.strict ? "R09" : "R11") : (path.strict ? "R12" : "R14");
    }
    if (!RuleTable::instance().enabled(id)) continue;
    ATerm concl = verdict ? app : ctx_.mk_not(app);
    emit(id, ctx_.mk_implies(ctx_.mk_and(premises(path, from, to)), concl));
    event(PropEvent::Kind::Assert, id, to_string(concl), app);
    cc_.merge(app, ctx_.mk_bool(verdict == 1), 0);
    ++changes_;
    return true;
  }
  return false;
}

bool Propagator::ite_rules() {
  bool fired = false;
  for (ATerm t : ites_) {
    if (collapsed_.count(t)) continue;
    const int v = value(t->args[0]);
    ATerm branch = nullptr;
    if (v >= 0)
      branch = t->args[v ? 1 : 2];
    else if (cc_.equal(t->args[1], t->args[2]))
      branch = t->args[1];
    if (!branch) continue;
    collapsed_.insert(t);
    event(PropEvent::Kind::IteCollapse, "", opts_.record_events ? to_string(t) + " -> " + to_string(branch) : "", t);
    cc_.merge(t, branch, 0);
    ++changes_;
    fired = true;
    if (contradiction()) return true;
  }
  return fired;
}

bool Propagator::clause_rules() {
  bool fired = false;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    int open = 0;
    const ALit* last = nullptr;
    bool sat = false;
    for (const ALit& l : clauses_[i]) {
      const int v = value(l.atom);
      if (v < 0) {
        ++open;
        last = &l;
      } else if ((v == 1) != l.neg) {
        sat = true;
        break;
      }
    }
    if (sat) continue;
    if (open == 0) {
      fail("clause falsified: " + to_string(clauses_[i]));
      return true;
    }
    if (open == 1) {
      const ALit l = *last;
      const std::size_t before = changes_;
      assert_term(l.atom, !l.neg);
      if (changes_ != before) {
        fired = true;
        if (contradiction()) return true;
      }
    }
  }
  return fired;
}

void Propagator::apply_rules() {
  while (!contradiction()) {
    bool fired = false;
    for (ATerm app : apps_) {
      if (is_ground(app)) {
        if (!evaluated_.count(app)) {
          ground_eval(app);
          fired = true;
        }
      } else {
        fired |= local_rules(app);
      }
      if (contradiction()) return;
    }
    if (!fired) fired = relgraph();
    if (contradiction()) return;
    if (!fired) fired = ite_rules();
    if (contradiction()) return;
    if (!fired) fired = clause_rules();
    if (!fired) break;
  }
}

PropResult Propagator::run() {
  PropResult out;
  int k = 0;
  bool unsat = contradiction();
  if (!unsat) {
    std::uint64_t before = 0;
    do {
      before = changes_;
      ++k;
      for (ATerm c : consts_) {
        update_related_uf(c);
        if ((unsat = contradiction())) break;
      }
      if (unsat) break;
      apply_rules();
      if ((unsat = contradiction())) break;
    } while (changes_ != before && k < opts_.bound);
  }
  out.verdict = unsat ? PropVerdict::Unsat : PropVerdict::Unknown;
  out.psi = psi_;
  out.events = events_;
  out.iterations = k;
  return out;
}

PropVerdict propagate(AbstractContext& ctx, const AbstractFormula& phi, int bound,
                      LemmaStore& lemmas, PropResult* detail) {
  PropOptions opts;
  opts.bound = bound;
  opts.record_events = detail != nullptr;
  Propagator p(ctx, phi, opts);
  PropResult r = p.run();
  for (const auto& l : r.psi) lemmas.add_dpl(l.formula, l.origin);
  const PropVerdict v = r.verdict;
  if (detail) *detail = std::move(r);
  return v;
}

}  // namespace dpmc
