#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dpmc/btor2.hpp"
#include "dpmc/cegar.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/euf.hpp"
#include "dpmc/ic3.hpp"
#include "dpmc/oracle.hpp"
#include "support.hpp"

using namespace dpmc;

namespace {

Verdict check(const TransitionSystem& ts, bool prop) {
  CegarConfig cfg;
  cfg.propagation = prop;
  Verdict v = dp_ic3(ts, cfg);
  test::audit_verdict(v);
  return v;
}

}  // namespace

TEST(Ic3, Fig2WithPropagationIsSafe) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  auto sys = dp_abstract(ts);
  LemmaStore lemmas;
  Ic3Stats st;
  const auto r = ic3_check(sys, lemmas, {}, &st);
  ASSERT_TRUE(r.safe);
  EXPECT_TRUE(verify_invariant(sys, lemmas, r.invariant));
  EXPECT_GT(st.queries_skipped_by_propagation, 0u);
  test::audit_dpls(*sys.map, lemmas);
}

TEST(Ic3, Fig2WithoutPropagationFindsInitialViolation) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  auto sys = dp_abstract(ts);
  LemmaStore lemmas;
  Ic3Config cfg;
  cfg.propagation = false;
  const auto r = ic3_check(sys, lemmas, cfg);
  ASSERT_FALSE(r.safe);
  EXPECT_EQ(r.trace.steps.size(), 1u);
}

TEST(Cegar, FirstRefinementBlocksInitialViolation) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  auto sys = dp_abstract(ts);
  LemmaStore lemmas;
  Ic3Config cfg;
  cfg.propagation = false;
  const auto r = ic3_check(sys, lemmas, cfg);
  ASSERT_FALSE(r.safe);
  const auto ref = dp_refine(sys, r.trace);
  ASSERT_FALSE(ref.lemmas.empty());
  AbstractContext& c = *sys.ctx;
  const ATerm x = c.mk_sym(c.find_symbol("x")), y = c.mk_sym(c.find_symbol("y"));
  const ATerm le = c.mk_app(c.ufun(OpKind::Ule, 2), {y, x});
  const ATerm q = c.mk_and({c.mk_eq(x, c.mk_const(0, 2)), c.mk_eq(y, c.mk_const(0, 2)),
                            c.mk_not(le), ref.lemmas.front()});
  EXPECT_FALSE(euf_check(c, q).sat);
  for (ATerm l : ref.lemmas) EXPECT_TRUE(test::gamma_valid(*sys.map, l)) << to_string(l);
}

TEST(Cegar, Fig2BothModes) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  const auto on = check(ts, true), off = check(ts, false);
  EXPECT_EQ(on.kind, VerdictKind::Safe);
  EXPECT_EQ(off.kind, VerdictKind::Safe);
  EXPECT_EQ(on.stats.refinements, 0u);
  EXPECT_GE(off.stats.refinements, 1u);
  EXPECT_LT(on.stats.refinements, off.stats.refinements);
}

TEST(Cegar, CounterWitnessReplays) {
  const auto ts = parse_btor2_file(test::data_path("counter_unsafe.btor2"));
  for (bool prop : {true, false}) {
    const auto v = check(ts, prop);
    ASSERT_EQ(v.kind, VerdictKind::Unsafe);
    EXPECT_EQ(v.witness.size(), 6u);
    EXPECT_EQ(replay_counterexample(ts, v.witness), "");
  }
}

TEST(Cegar, BadInitialState) {
  const auto ts = parse_btor2_file(test::data_path("bad_init.btor2"));
  const auto v = check(ts, true);
  ASSERT_EQ(v.kind, VerdictKind::Unsafe);
  EXPECT_EQ(v.witness.size(), 1u);
  EXPECT_EQ(replay_counterexample(ts, v.witness), "");
}

TEST(Cegar, NotSpuriousOnRealTrace) {
  const auto ts = parse_btor2_file(test::data_path("bad_init.btor2"));
  auto sys = dp_abstract(ts);
  LemmaStore lemmas;
  const auto r = ic3_check(sys, lemmas);
  ASSERT_FALSE(r.safe);
  EXPECT_THROW(dp_refine(sys, r.trace), NotSpurious);
}

TEST(Cegar, BudgetGivesUnknown) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  CegarConfig cfg;
  cfg.propagation = false;
  cfg.max_refinements = 0;
  EXPECT_EQ(dp_ic3(ts, cfg).kind, VerdictKind::Unknown);
}

TEST(Oracle, Reachability) {
  const auto ts = parse_btor2_file(test::data_path("counter_unsafe.btor2"));
  const auto r = bfs_reachability(ts);
  ASSERT_TRUE(r.reachable);
  EXPECT_EQ(r.trace.size(), 6u);
  EXPECT_EQ(replay_counterexample(ts, r.trace), "");
  EXPECT_FALSE(bfs_reachability(parse_btor2_file(test::data_path("fig2.btor2"))).reachable);
  EXPECT_THROW(bfs_reachability(ts, 2), TooLarge);
}

TEST(Oracle, ReplayRejectsBrokenTrace) {
  const auto ts = parse_btor2_file(test::data_path("counter_unsafe.btor2"));
  auto tr = bfs_reachability(ts).trace;
  tr.erase(tr.begin() + 2);
  EXPECT_NE(replay_counterexample(ts, tr), "");
}

TEST(Oracle, Validity) {
  TermManager tm;
  const Sort s = Sort::bv(4);
  Term x = tm.mk_var("x", s, VarRole::State);
  EXPECT_TRUE(bv_valid_exhaustive(tm.mk_op(OpKind::Ule, tm.mk_const(0, s), x)).valid);
  const auto v = bv_valid_exhaustive(tm.mk_op(OpKind::Ult, x, tm.mk_const(15, s)));
  EXPECT_FALSE(v.valid);
  EXPECT_EQ(v.counter_model.at("x"), 15u);
}

TEST(Oracle, RandomSystemIsDeterministic) {
  EXPECT_EQ(print_btor2(random_system(7)), print_btor2(random_system(7)));
  std::ifstream in(test::data_path("random_seed0.btor2"));
  ASSERT_TRUE(in) << "missing golden file";
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(print_btor2(random_system(0)), golden.str());
}
