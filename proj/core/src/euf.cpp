#include "dpmc/euf.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "dpmc/congruence.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/sat.hpp"

namespace dpmc {

namespace {

using sat::Lit;

std::atomic<std::uint64_t> g_dumps{0};

class Encoder {
 public:
  Encoder(AbstractContext& ctx, sat::Solver& s) : ctx_(ctx), s_(s) {
    tt_ = Lit::make(s_.new_var());
    s_.add_clause({tt_});
  }

  Lit encode(ATerm root) {
    if (auto it = lit_of_.find(root); it != lit_of_.end()) return it->second;
    for (ATerm t : atopo_order({root})) {
      if (lit_of_.count(t) || done_.count(t)) continue;
      if (!t->is_bool()) {
        done_.insert(t);
        if (t->kind == AKind::Ite) encode_ite(t);
        continue;
      }
      lit_of_.emplace(t, make(t));
    }
    return lit_of_.at(root);
  }

  const std::vector<ATerm>& atoms() const { return atoms_; }
  const std::vector<ATerm>& props() const { return props_; }
  Lit lit(ATerm t) const { return lit_of_.at(t); }

 private:
  Lit fresh() { return Lit::make(s_.new_var()); }

  Lit make(ATerm t) {
    switch (t->kind) {
      case AKind::True: return tt_;
      case AKind::False: return ~tt_;
      case AKind::Sym:
        props_.push_back(t);
        return fresh();
      case AKind::App:
      case AKind::Eq:
        atoms_.push_back(t);
        return fresh();
      case AKind::Not: return ~lit_of_.at(t->args[0]);
      case AKind::And:
      case AKind::Or: {
        const bool is_and = t->kind == AKind::And;
        Lit o = fresh();
        std::vector<Lit> big{is_and ? o : ~o};
        for (ATerm a : t->args) {
          Lit l = lit_of_.at(a);
          if (is_and) {
            s_.add_clause({~o, l});
            big.push_back(~l);
          } else {
            s_.add_clause({o, ~l});
            big.push_back(l);
          }
        }
        s_.add_clause(big);
        return o;
      }
      case AKind::Ite: break;
    }
    throw std::logic_error("unexpected boolean ite");
  }

  void encode_ite(ATerm t) {
    const Lit c = lit_of_.at(t->args[0]);
    const Lit e1 = encode(ctx_.mk_eq(t, t->args[1]));
    const Lit e2 = encode(ctx_.mk_eq(t, t->args[2]));
    s_.add_clause({~c, e1});
    s_.add_clause({c, e2});
  }

  AbstractContext& ctx_;
  sat::Solver& s_;
  Lit tt_;
  std::unordered_map<ATerm, Lit> lit_of_;
  std::unordered_set<ATerm> done_;
  std::vector<ATerm> atoms_;
  std::vector<ATerm> props_;
};

void dump_query(const EufQuery& q, AbstractContext& ctx, const std::string& dir) {
  AbstractFormula f = q.phi;
  for (ATerm a : q.assumptions) f.add_unit(a);
  (void)ctx;
  char name[64];
  std::snprintf(name, sizeof name, "/query_%06llu.smt2",
                static_cast<unsigned long long>(g_dumps++));
  std::ofstream out(dir + name);
  out << to_smtlib(f);
}

}  // namespace

std::uint64_t euf_dump_count() { return g_dumps.load(); }

int EufModel::class_of(ATerm t) const {
  auto it = classes.find(t);
  return it == classes.end() ? -1 : it->second;
}

bool EufModel::same_class(ATerm a, ATerm b) const {
  const int ca = class_of(a);
  return ca >= 0 && ca == class_of(b);
}

ATerm EufModel::const_of(ATerm t) const {
  auto it = class_const.find(class_of(t));
  return it == class_const.end() ? nullptr : it->second;
}

bool EufModel::value(ATerm t) const {
  switch (t->kind) {
    case AKind::True: return true;
    case AKind::False: return false;
    case AKind::Sym:
    case AKind::App:
    case AKind::Eq: {
      if (auto it = atoms.find(t); it != atoms.end()) return it->second;
      if (t->kind == AKind::Eq) return same_class(t->args[0], t->args[1]);
      if (t->kind == AKind::App) return class_of(t) >= 0 && class_of(t) == true_class;
      return false;
    }
    case AKind::Not: return !value(t->args[0]);
    case AKind::And:
      for (ATerm a : t->args)
        if (!value(a)) return false;
      return true;
    case AKind::Or:
      for (ATerm a : t->args)
        if (value(a)) return true;
      return false;
    case AKind::Ite: break;
  }
  return false;
}

EufResult euf_check(AbstractContext& ctx, const EufQuery& q, const EufOptions& opts) {
  if (!opts.dump_dir.empty()) dump_query(q, ctx, opts.dump_dir);
  sat::Solver s;
  Encoder enc(ctx, s);
  for (const auto& c : q.phi.clauses) {
    std::vector<Lit> ls;
    for (const auto& l : c) {
      const Lit x = enc.encode(l.atom);
      ls.push_back(l.neg ? ~x : x);
    }
    s.add_clause(ls);
  }
  std::vector<Lit> assumps;
  std::unordered_map<int, std::size_t> index_of;
  for (std::size_t i = 0; i < q.assumptions.size(); ++i) {
    const Lit l = enc.encode(q.assumptions[i]);
    assumps.push_back(l);
    index_of.emplace(l.x, i);
  }

  EufResult res;
  for (std::int64_t round = 0;; ++round) {
    if (opts.theory_budget >= 0 && round > opts.theory_budget)
      throw ResourceLimit("EUF query exceeded its theory budget");
    const auto r = s.solve(assumps, opts.sat_budget);
    if (r == sat::Result::Unknown) throw ResourceLimit("EUF query exceeded its SAT budget");
    if (r == sat::Result::Unsat) {
      for (Lit l : s.conflict_assumptions()) res.core.push_back(index_of.at(l.x));
      std::sort(res.core.begin(), res.core.end());
      res.core.erase(std::unique(res.core.begin(), res.core.end()), res.core.end());
      return res;
    }
    const auto& atoms = enc.atoms();
    std::vector<bool> val(atoms.size());
    CongruenceClosure cc(ctx);
    for (ATerm t : q.observe) cc.add(t);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      ATerm a = atoms[i];
      val[i] = s.model_value(enc.lit(a));
      const int label = static_cast<int>(i);
      if (a->kind == AKind::Eq) {
        if (val[i])
          cc.merge(a->args[0], a->args[1], label);
        else
          cc.assert_diseq(a->args[0], a->args[1], label);
      } else {
        cc.merge(a, ctx.mk_bool(val[i]), label);
      }
    }
    if (!cc.check()) {
      std::vector<Lit> clause;
      for (int i : cc.conflict()) {
        const Lit l = enc.lit(atoms[i]);
        clause.push_back(val[i] ? ~l : l);
      }
      s.add_clause(clause);
      continue;
    }
    res.sat = true;
    EufModel& m = res.model;
    std::unordered_map<int, int> norm;
    for (ATerm t : cc.terms()) {
      const int rep = cc.find(t);
      auto [it, ins] = norm.emplace(rep, static_cast<int>(norm.size()));
      m.classes.emplace(t, it->second);
      if (ATerm c = cc.const_of(t)) m.class_const.emplace(it->second, c);
    }
    m.true_class = m.class_of(ctx.mk_true());
    m.false_class = m.class_of(ctx.mk_false());
    for (std::size_t i = 0; i < atoms.size(); ++i) m.atoms.emplace(atoms[i], val[i]);
    for (ATerm p : enc.props()) m.atoms.emplace(p, s.model_value(enc.lit(p)));
    return res;
  }
}

EufResult euf_check(AbstractContext& ctx, ATerm phi, const EufOptions& opts) {
  EufQuery q;
  q.phi.add_unit(phi);
  return euf_check(ctx, q, opts);
}

}  // namespace dpmc
