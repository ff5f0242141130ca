// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "dpmc/bitblast.hpp"
#include "dpmc/btor2.hpp"
#include "dpmc/cegar.hpp"
#include "dpmc/euf.hpp"
#include "dpmc/oracle.hpp"
#include "dpmc/propagation.hpp"
#include "dpmc/rules.hpp"
#include "support.hpp"

using namespace dpmc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string summary;
};

std::vector<Outcome> results(9);

void detail(const std::string& s) { std::cout << "  " << s << "\n"; }

Verdict run_fig2(bool prop, double* secs) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  CegarConfig cfg;
  cfg.propagation = prop;
  const auto t0 = Clock::now();
  Verdict v = dp_ic3(ts, cfg);
  *secs = seconds_since(t0);
  test::audit_verdict(v);
  return v;
}

bool has_dpl(const LemmaStore& ls, const std::string& text) {
  const auto& d = ls.dpl();
  return std::any_of(d.begin(), d.end(), [&](const Lemma& l) { return to_string(l.formula) == text; });
}

void criterion1() {
  double secs = 0;
  const auto v = run_fig2(true, &secs);
  const bool le00 = has_dpl(v.lemmas, "LE(0,0)"), add01 = has_dpl(v.lemmas, "1=ADD(0,1)");
  std::ostringstream os;
  os << "fig2 prop-on: verdict=" << to_string(v.kind) << " refinements=" << v.stats.refinements
     << " dpl=" << v.stats.dpl_count << " LE(0,0)=" << le00 << " 1=ADD(0,1)=" << add01
     << " time=" << secs << "s";
  results[1] = {v.kind == VerdictKind::Safe && v.stats.refinements == 0 && le00 && add01 && secs < 1,
                os.str()};
}

std::uint64_t fig2_off_refinements = 0, fig2_on_refinements = 0;

void criterion2() {
  double secs = 0;
  const auto v = run_fig2(false, &secs);
  fig2_off_refinements = v.stats.refinements;
  bool drl1 = false;
  std::string first = "<none>";
  if (!v.lemmas.drl().empty()) {
    const ATerm l = v.lemmas.drl().front().formula;
    first = to_string(l);
    AbstractContext& c = *v.system->ctx;
    const ATerm x = c.mk_sym(c.find_symbol("x")), y = c.mk_sym(c.find_symbol("y"));
    const ATerm k0 = c.mk_const(0, 2);
    const ATerm le = c.mk_app(c.ufun(OpKind::Ule, 2), {y, x});
    // Under the initial values the lemma must force LE(y,x), i.e. LE(0,x).
    const ATerm q = c.mk_and({c.mk_eq(x, k0), c.mk_eq(y, k0), l, c.mk_not(le)});
    bool mentions_le = false;
    for (Sym s : symb(l)) mentions_le |= s->base == "LE";
    drl1 = mentions_le && !euf_check(c, q).sat;
  }
  std::ostringstream os;
  os << "fig2 prop-off: verdict=" << to_string(v.kind) << " refinements=" << v.stats.refinements
     << " drl1=" << first << " entails-LE(0,x)=" << drl1 << " time=" << secs << "s";
  results[2] = {v.kind == VerdictKind::Safe && v.stats.refinements >= 1 &&
                    v.stats.refinements <= 20 && drl1 && secs < 5,
                os.str()};
}

void criteria3and6() {
  double secs = 0;
  fig2_on_refinements = run_fig2(true, &secs).stats.refinements;
  const auto t0 = Clock::now();
  int solved_both = 0, dominance_violations = 0, mismatches = 0, unknown = 0, replay_failures = 0,
      unsafe = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ts = random_system(seed, 8);
    const bool reachable = bfs_reachability(ts).reachable;
    Verdict vs[2];
    for (int prop = 0; prop < 2; ++prop) {
      CegarConfig cfg;
      cfg.propagation = prop == 1;
      vs[prop] = dp_ic3(ts, cfg);
      const Verdict& v = vs[prop];
      test::audit_verdict(v);
      if (v.kind == VerdictKind::Unknown) {
        ++unknown;
        continue;
      }
      if ((v.kind == VerdictKind::Unsafe) != reachable) {
        ++mismatches;
        detail("seed " + std::to_string(seed) + " mode " + std::to_string(prop) + " disagrees with BFS");
      }
      if (v.kind == VerdictKind::Unsafe) {
        ++unsafe;
        if (!replay_counterexample(ts, v.witness).empty()) ++replay_failures;
      }
    }
    if (vs[0].kind != VerdictKind::Unknown && vs[1].kind != VerdictKind::Unknown) {
      ++solved_both;
      if (vs[1].stats.refinements > vs[0].stats.refinements) {
        ++dominance_violations;
        detail("seed " + std::to_string(seed) + " refinements on=" +
               std::to_string(vs[1].stats.refinements) +
               " off=" + std::to_string(vs[0].stats.refinements));
      }
    }
  }
  const double total = seconds_since(t0);
  std::ostringstream o3, o6;
  o3 << "dominance: fig2 on=" << fig2_on_refinements << " off=" << fig2_off_refinements
     << "; random solved-in-both=" << solved_both << "/100 violations=" << dominance_violations
     << " time=" << total << "s";
  results[3] = {fig2_on_refinements < fig2_off_refinements && dominance_violations == 0 &&
                    total < 300,
                o3.str()};
  o6 << "oracle: 100 systems x 2 modes, mismatches=" << mismatches << " unknown=" << unknown
     << " unsafe=" << unsafe << " replay-failures=" << replay_failures << " time=" << total << "s";
  results[6] = {mismatches == 0 && replay_failures == 0 && total < 600, o6.str()};
}

void criterion4() {
  const auto t0 = Clock::now();
  const auto& table = RuleTable::instance();
  std::size_t valid = 0;
  for (const auto& g : table.gate()) valid += g.valid;
  bool variants_invalid = true;
  for (const auto& r : RuleTable::printed_variants()) {
    const auto g = RuleTable::validate(r);
    variants_invalid &= !g.valid && !g.counter_model.empty();
    std::ostringstream os;
    os << "printed form " << r.id << " (" << r.text << ") " << (g.valid ? "valid" : "invalid")
       << " at width " << g.width << ":";
    for (const auto& [n, val] : g.counter_model) os << " " << n << "=" << val;
    detail(os.str());
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "rule gate: " << valid << "/" << table.gate().size()
     << " registered rules valid at widths 1-4; printed variants refuted=" << variants_invalid
     << " time=" << secs << "s";
  results[4] = {valid == table.gate().size() && !table.gate().empty() && variants_invalid &&
                    secs < 60,
                os.str()};
}

bool has_event(const PropResult& r, PropEvent::Kind k, const std::string& rule,
               const std::string& text) {
  return std::any_of(r.events.begin(), r.events.end(), [&](const PropEvent& e) {
    return e.kind == k && e.rule == rule && e.text == text;
  });
}

void criterion7() {
  const auto t0 = Clock::now();
  test::Fixture f;
  AbstractContext& c = *f.ctx;
  ATerm x = f.var("x", 2), y = f.var("y", 2), u = f.var("u", 2), v = f.var("v", 2);
  ATerm k0 = f.k(0, 2), k1 = f.k(1, 2);
  auto run = [&](const AbstractFormula& phi, PropResult& r) {
    LemmaStore ls;
    const auto verdict = propagate(c, phi, 20, ls, &r);
    test::audit_dpls(f.map, ls);
    return verdict;
  };

  AbstractFormula e1;
  e1.add_unit(c.mk_eq(x, y));
  e1.add_unit(c.mk_eq(u, f.app(OpKind::Sub, {x, y})));
  e1.add_unit(c.mk_eq(v, k0));
  e1.add_unit(f.app(OpKind::Ult, {u, v}));
  PropResult r1;
  const bool ok1 = run(e1, r1) == PropVerdict::Unsat &&
                   has_event(r1, PropEvent::Kind::Rewrite, "A04", "SUB(x,y) -> 0") &&
                   r1.events.back().kind == PropEvent::Kind::Contradiction;

  AbstractFormula e2;
  e2.add_unit(c.mk_eq(x, k0));
  e2.add_unit(c.mk_eq(y, f.app(OpKind::Add, {x, k1})));
  e2.add_unit(f.app(OpKind::Ult, {y, x}));
  PropResult r2;
  std::vector<std::string> psi;
  const bool unsat2 = run(e2, r2) == PropVerdict::Unsat;
  for (const auto& l : r2.psi) psi.push_back(to_string(l.formula));
  const bool ok2 = unsat2 && psi == std::vector<std::string>{"1=ADD(0,1)", "!LT(1,0)"} &&
                   has_event(r2, PropEvent::Kind::GroundEval, "", "ADD(0,1) = 1");

  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  auto sys = dp_abstract(ts);
  AbstractFormula e3;
  e3.add_unit(sys.prop);
  e3.add_unit(sys.trans);
  e3.add_unit(sys.prop_next, true);
  LemmaStore ls3;
  PropResult r3;
  const bool ok3 = propagate(*sys.ctx, e3, 20, ls3, &r3) == PropVerdict::Unknown &&
                   has_event(r3, PropEvent::Kind::Assert, "R05", "!LT(x,y)");
  test::audit_dpls(*sys.map, ls3);

  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "worked examples: ex1-unsat-via-SUB=" << ok1 << " ex2-psi=" << ok2
     << " ex3-third-query-unknown-LT(x,y)-false=" << ok3 << " time=" << secs << "s";
  results[7] = {ok1 && ok2 && ok3 && secs < 1, os.str()};
}

// Random concrete terms for the bit-blaster check.
struct TermGen {
  TermManager& tm;
  std::mt19937_64& rng;
  std::vector<Term> vars;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Term leaf(unsigned w) {
    std::vector<Term> same;
    for (Term v : vars)
      if (v->sort.width == w) same.push_back(v);
    if (!same.empty() && pick(3) != 0) return same[pick(same.size())];
    return tm.mk_const(rng() & Sort::bv(w).max_value(), Sort::bv(w));
  }

  Term bv(unsigned w, int depth) {
    if (depth == 0 || pick(4) == 0) return leaf(w);
    static const OpKind bin[] = {OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Udiv, OpKind::Urem,
                                 OpKind::And, OpKind::Or,  OpKind::Xor, OpKind::Nand, OpKind::Nor,
                                 OpKind::Xnor, OpKind::Sll, OpKind::Srl, OpKind::Sra, OpKind::Sla};
    static const OpKind red[] = {OpKind::RedAnd, OpKind::RedOr,  OpKind::RedXor,
                                 OpKind::RedNand, OpKind::RedNor, OpKind::RedXnor};
    const std::size_t k = pick(10);
    if (k == 0) return tm.mk_op(OpKind::Not, bv(w, depth - 1));
    if (k == 1) return tm.mk_ite(pred(depth - 1), bv(w, depth - 1), bv(w, depth - 1));
    if (k == 2 && w == 1) {
      Term v = vars[pick(vars.size())];
      return tm.mk_op(red[pick(6)], bv(v->sort.width, depth - 1));
    }
    return tm.mk_op(bin[pick(std::size(bin))], bv(w, depth - 1), bv(w, depth - 1));
  }

  Term pred(int depth) {
    const unsigned w = vars[pick(vars.size())]->sort.width;
    static const OpKind rel[] = {OpKind::Ult, OpKind::Ule, OpKind::Eq, OpKind::Neq};
    Term a = tm.mk_op(rel[pick(4)], bv(w, depth), bv(w, depth));
    if (depth > 0 && pick(3) == 0) {
      Term b = pred(depth - 1);
      return pick(2) ? tm.mk_and(a, b) : tm.mk_or(tm.mk_not(a), b);
    }
    return a;
  }
};

// Random abstract conjunctions for the EUF soundness check.
AbstractFormula random_abstract(test::Fixture& f, std::mt19937_64& rng, unsigned w) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<ATerm> pool;
  for (const char* n : {"a", "b", "c"}) pool.push_back(f.var(n, w));
  for (std::uint64_t v = 0; v < 3; ++v) pool.push_back(f.k(v & Sort::bv(w).max_value(), w));
  static const OpKind fun[] = {OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Udiv, OpKind::And,
                               OpKind::Xor, OpKind::Srl};
  for (int i = 0; i < 3; ++i)
    pool.push_back(f.app(fun[pick(std::size(fun))], {pool[pick(pool.size())], pool[pick(pool.size())]}));
  AbstractContext& c = *f.ctx;
  AbstractFormula phi;
  const std::size_t n = 4 + pick(6);
  for (std::size_t i = 0; i < n; ++i) {
    ATerm a = pool[pick(pool.size())], b = pool[pick(pool.size())];
    ATerm atom = nullptr;
    switch (pick(4)) {
      case 0:
      case 1: atom = c.mk_eq(a, b); break;
      case 2: atom = f.app(OpKind::Ult, {a, b}); break;
      default: atom = f.app(OpKind::Ule, {a, b}); break;
    }
    if (atom->kind == AKind::True || atom->kind == AKind::False) continue;
    if (pick(4) == 0) {
      ATerm other = c.mk_eq(pool[pick(pool.size())], pool[pick(pool.size())]);
      phi.add({ALit{atom, pick(2) == 0}, ALit{other, pick(2) == 0}});
    } else {
      phi.add_unit(atom, pick(3) == 0);
    }
  }
  return phi;
}

void criterion8() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20241016);
  int terms = 0, disagreements = 0, sat_count = 0;
  for (; terms < 600; ++terms) {
    TermManager tm;
    TermGen g{tm, rng, {}};
    unsigned bits = 0;
    const std::size_t nv = 1 + g.pick(3);
    for (std::size_t i = 0; i < nv; ++i) {
      const unsigned w = 1 + static_cast<unsigned>(g.pick(4));
      if (bits + w > 12) break;
      bits += w;
      g.vars.push_back(tm.mk_var("v" + std::to_string(i), Sort::bv(w), VarRole::State));
    }
    const Term t = g.pred(2);
    const auto r = bv_check(t);
    const bool sat_enum = !bv_valid_exhaustive(tm.mk_not(t), 12).valid;
    bool agree = r.sat == sat_enum;
    if (r.sat) {
      ++sat_count;
      Env env;
      for (Term v : free_vars(t)) env[v] = r.model.count(v) ? r.model.at(v) : 0;
      agree &= eval_concrete(t, env) == 1;
    }
    if (!agree) {
      ++disagreements;
      detail("bv_check disagrees on " + to_string(t));
    }
  }
  int formulas = 0, euf_unsat = 0, unsound = 0;
  while (euf_unsat < 200 && formulas < 50000) {
    ++formulas;
    test::Fixture f;
    const unsigned w = 1 + static_cast<unsigned>(rng() % 3);
    const AbstractFormula phi = random_abstract(f, rng, w);
    if (euf_check(*f.ctx, phi.to_term(*f.ctx)).sat) continue;
    ++euf_unsat;
    if (bv_check(f.map.gamma(phi.to_term(*f.ctx))).sat) {
      ++unsound;
      detail("EUF-unsat but BV-sat: " + to_smtlib(phi));
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "solver backends: bv_check vs enumeration on " << terms << " terms (" << sat_count
     << " sat), disagreements=" << disagreements << "; " << formulas << " abstract formulas, "
     << euf_unsat << " EUF-unsat, BV-sat among them=" << unsound << " time=" << secs << "s";
  results[8] = {terms >= 500 && formulas >= 200 && disagreements == 0 && unsound == 0 &&
                    euf_unsat >= 200 && secs < 300,
                os.str()};
}

void criterion5() {
  const auto& a = test::dpl_audit();
  for (const auto& v : a.violations) detail("invalid DPL: " + v);
  std::ostringstream os;
  os << "DPL audit: " << a.checked << " DPLs checked (" << a.exhaustive
     << " by enumeration), violations=" << a.violations.size();
  results[5] = {a.violations.empty() && a.checked > 0, os.str()};
}

}  // namespace

int main() {
  criterion4();
  criterion1();
  criterion2();
  criteria3and6();
  criterion7();
  criterion8();
  criterion5();
  int failed = 0;
  for (int i = 1; i <= 8; ++i) {
    std::cout << (results[i].pass ? "PASS" : "FAIL") << " criterion " << i << ": "
              << results[i].summary << "\n";
    failed += !results[i].pass;
  }
  return failed == 0 ? 0 : 1;
}
