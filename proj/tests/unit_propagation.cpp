#include <gtest/gtest.h>

#include <algorithm>

#include "dpmc/btor2.hpp"
#include "dpmc/propagation.hpp"
#include "support.hpp"

using namespace dpmc;

namespace {

bool has_event(const PropResult& r, PropEvent::Kind k, const std::string& rule,
               const std::string& text) {
  return std::any_of(r.events.begin(), r.events.end(), [&](const PropEvent& e) {
    return e.kind == k && e.rule == rule && e.text == text;
  });
}

std::vector<std::string> psi_text(const PropResult& r) {
  std::vector<std::string> out;
  for (const auto& l : r.psi) out.push_back(to_string(l.formula));
  return out;
}

class Propagation : public ::testing::Test {
 protected:
  test::Fixture f;
  ATerm x = f.var("x", 2), y = f.var("y", 2), u = f.var("u", 2), v = f.var("v", 2),
        z = f.var("z", 2);
  ATerm k0 = f.k(0, 2), k1 = f.k(1, 2);
  AbstractContext& c = *f.ctx;

  PropResult run(const AbstractFormula& phi) {
    LemmaStore ls;
    PropResult r;
    propagate(c, phi, 20, ls, &r);
    test::audit_dpls(f.map, ls);
    return r;
  }
};

}  // namespace

TEST_F(Propagation, SubtractionOfEqualTermsContradicts) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, y));
  phi.add_unit(c.mk_eq(u, f.app(OpKind::Sub, {x, y})));
  phi.add_unit(c.mk_eq(v, k0));
  phi.add_unit(f.app(OpKind::Ult, {u, v}));
  const auto r = run(phi);
  EXPECT_EQ(r.verdict, PropVerdict::Unsat);
  EXPECT_TRUE(has_event(r, PropEvent::Kind::Rewrite, "A04", "SUB(x,y) -> 0"));
  EXPECT_TRUE(has_event(r, PropEvent::Kind::GroundEval, "", "LT(0,0) = 0"));
  EXPECT_EQ(r.events.back().kind, PropEvent::Kind::Contradiction);
}

TEST_F(Propagation, IncrementOfZero) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, k0));
  phi.add_unit(c.mk_eq(y, f.app(OpKind::Add, {x, k1})));
  phi.add_unit(f.app(OpKind::Ult, {y, x}));
  const auto r = run(phi);
  EXPECT_EQ(r.verdict, PropVerdict::Unsat);
  EXPECT_EQ(psi_text(r), (std::vector<std::string>{"1=ADD(0,1)", "!LT(1,0)"}));
  EXPECT_TRUE(has_event(r, PropEvent::Kind::GroundEval, "", "ADD(0,1) = 1"));
  EXPECT_TRUE(has_event(r, PropEvent::Kind::GroundEval, "", "LT(1,0) = 0"));
}

TEST_F(Propagation, Fig2InitialQuery) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, k0));
  phi.add_unit(c.mk_eq(y, k0));
  phi.add_unit(f.app(OpKind::Ule, {y, x}), true);
  const auto r = run(phi);
  EXPECT_EQ(r.verdict, PropVerdict::Unsat);
  const auto psi = psi_text(r);
  EXPECT_NE(std::find(psi.begin(), psi.end(), "LE(0,0)"), psi.end());
  EXPECT_NE(std::find(psi.begin(), psi.end(), "(LE(y,x) | x!=y)"), psi.end());
}

TEST(PropagationFig2, InductionQueryDecidesLessThanFalse) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  auto sys = dp_abstract(ts);
  AbstractFormula phi;
  phi.add_unit(sys.prop);
  phi.add_unit(sys.trans);
  phi.add_unit(sys.prop_next, true);
  LemmaStore ls;
  PropResult r;
  EXPECT_EQ(propagate(*sys.ctx, phi, 20, ls, &r), PropVerdict::Unknown);
  EXPECT_TRUE(has_event(r, PropEvent::Kind::Assert, "R05", "!LT(x,y)"));
  EXPECT_TRUE(std::any_of(r.events.begin(), r.events.end(), [](const PropEvent& e) {
    return e.kind == PropEvent::Kind::IteCollapse && e.text == "ite(LT(x,y),y,x) -> x";
  }));
  test::audit_dpls(*sys.map, ls);
}

TEST_F(Propagation, UpdateRelatedTouchesApplications) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, k0));
  phi.add_unit(c.mk_eq(y, x));
  phi.add_unit(c.mk_eq(z, k1));
  phi.add_unit(c.mk_eq(v, f.app(OpKind::Add, {u, y})));
  phi.add_unit(f.app(OpKind::Ult, {x, z}));
  Propagator p(c, phi);
  std::vector<std::string> touched;
  for (ATerm t : p.update_related_uf(k0)) touched.push_back(to_string(t));
  EXPECT_EQ(touched, (std::vector<std::string>{"ADD(u,0)", "LT(0,z)"}));
}

TEST_F(Propagation, UpdateRelatedCascades) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, k0));
  phi.add_unit(c.mk_eq(v, f.app(OpKind::Add, {f.app(OpKind::Mul, {x, y}), z})));
  Propagator p(c, phi);
  std::vector<std::string> touched;
  for (ATerm t : p.update_related_uf(k0)) touched.push_back(to_string(t));
  EXPECT_EQ(touched, (std::vector<std::string>{"MUL(0,y)", "ADD(0,z)"}));
}

TEST_F(Propagation, MissingResultConstantGivesDisequalities) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(u, f.app(OpKind::Add, {k1, k1})));
  phi.add_unit(c.mk_eq(v, f.k(3, 2)));
  phi.add_unit(c.mk_eq(x, k0));
  const auto r = run(phi);
  EXPECT_EQ(r.verdict, PropVerdict::Unknown);
  const ATerm sum = f.app(OpKind::Add, {k1, k1});
  std::vector<ATerm> expected, got;
  for (std::uint64_t k : {0, 1, 3}) expected.push_back(c.mk_not(c.mk_eq(f.k(k, 2), sum)));
  for (const auto& l : r.psi) got.push_back(l.formula);
  EXPECT_EQ(got, expected);
}

TEST_F(Propagation, OrderChainRefutesReverseEdge) {
  AbstractFormula phi;
  phi.add_unit(f.app(OpKind::Ult, {x, y}));
  phi.add_unit(f.app(OpKind::Ule, {y, u}));
  phi.add({ALit{f.app(OpKind::Ule, {u, x}), false}, ALit{c.mk_eq(v, z), false}});
  const auto r = run(phi);
  EXPECT_TRUE(has_event(r, PropEvent::Kind::Assert, "R12", "!LE(u,x)"));
}

TEST_F(Propagation, StrictCycleIsUnsat) {
  AbstractFormula phi;
  phi.add_unit(f.app(OpKind::Ult, {x, y}));
  phi.add_unit(f.app(OpKind::Ult, {y, u}));
  phi.add_unit(f.app(OpKind::Ule, {u, x}));
  EXPECT_EQ(run(phi).verdict, PropVerdict::Unsat);
}

TEST_F(Propagation, StaysWithinFormulaSymbols) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, f.k(2, 2)));
  phi.add_unit(c.mk_eq(y, f.app(OpKind::Mul, {x, x})));
  phi.add_unit(f.app(OpKind::Ult, {y, x}), true);
  const SymSet before = symb(phi);
  const auto r = run(phi);
  for (const auto& l : r.psi)
    for (Sym s : symb(l.formula)) EXPECT_TRUE(before.count(s)) << to_string(l.formula);
}

TEST_F(Propagation, BoundLimitsIterations) {
  AbstractFormula phi;
  phi.add_unit(c.mk_eq(x, k0));
  phi.add_unit(c.mk_eq(y, f.app(OpKind::Add, {x, k1})));
  phi.add_unit(c.mk_eq(z, f.app(OpKind::Add, {y, k1})));
  LemmaStore ls;
  PropResult r;
  propagate(c, phi, 1, ls, &r);
  EXPECT_EQ(r.iterations, 1);
}
