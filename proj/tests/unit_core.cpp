#include <gtest/gtest.h>

#include <sstream>

#include "dpmc/bitblast.hpp"
#include "dpmc/btor2.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/sat.hpp"
#include "dpmc/term.hpp"
#include "support.hpp"

using namespace dpmc;

TEST(Term, HashConsing) {
  TermManager tm;
  Term x = tm.mk_var("x", Sort::bv(4), VarRole::State);
  Term a = tm.mk_op(OpKind::Add, x, tm.mk_const(1, Sort::bv(4)));
  Term b = tm.mk_op(OpKind::Add, x, tm.mk_const(1, Sort::bv(4)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(tm.find_var("x"), x);
  EXPECT_THROW(tm.mk_var("x", Sort::bv(3), VarRole::State), SortMismatch);
  EXPECT_THROW(tm.mk_op(OpKind::Add, x, tm.mk_const(1, Sort::bv(3))), SortMismatch);
}

TEST(Term, DivisionByZeroConvention) {
  EXPECT_EQ(apply_op(OpKind::Udiv, 4, 9, 0), 15u);
  EXPECT_EQ(apply_op(OpKind::Urem, 4, 9, 0), 9u);
  EXPECT_EQ(apply_op(OpKind::Sub, 4, 0, 1), 15u);
  EXPECT_EQ(apply_op(OpKind::Sra, 4, 8, 1), 12u);
  EXPECT_EQ(apply_op(OpKind::RedOr, 4, 0), 0u);
  EXPECT_EQ(apply_op(OpKind::RedAnd, 4, 15), 1u);
}

TEST(Term, Eval) {
  TermManager tm;
  Term x = tm.mk_var("x", Sort::bv(3), VarRole::State);
  Term t = tm.mk_ite(tm.mk_op(OpKind::Ult, x, tm.mk_const(4, Sort::bv(3))),
                     tm.mk_op(OpKind::Mul, x, x), x);
  EXPECT_EQ(eval_concrete(t, {{x, 3}}), 1u);
  EXPECT_EQ(eval_concrete(t, {{x, 6}}), 6u);
}

TEST(Btor2, ParsesCounters) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  EXPECT_EQ(ts.state_vars.size(), 2u);
  EXPECT_EQ(ts.input_vars.size(), 0u);
  EXPECT_EQ(ts.state_bits(), 4u);
  EXPECT_NO_THROW(ts.validate());
}

TEST(Btor2, RejectsUnsupported) {
  EXPECT_THROW(parse_btor2_file(test::data_path("concat.btor2")), UnsupportedFeature);
  EXPECT_THROW(parse_btor2_file(test::data_path("no_bad.btor2")), ParseError);
  EXPECT_THROW(parse_btor2(std::string_view("1 sort bitvec 2\n2 foo 1\n")), UnsupportedFeature);
  EXPECT_THROW(parse_btor2(std::string_view("1 sort bitvec 2\n2 state 9 x\n")), ParseError);
}

TEST(Btor2, StateWithoutNextIsUnconstrained) {
  const auto ts = parse_btor2(std::string_view(
      "1 sort bitvec 1\n2 sort bitvec 2\n3 state 2 a\n4 state 2 b\n5 next 2 4 3\n"
      "6 zero 2\n7 eq 1 4 6\n8 bad 7\n"));
  ASSERT_EQ(ts.state_vars.size(), 2u);
  ASSERT_EQ(ts.input_vars.size(), 1u);
  EXPECT_EQ(ts.next.at(ts.state_vars[0]), ts.input_vars[0]);
}

TEST(Btor2, PrintRoundTrips) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  const std::string text = print_btor2(ts);
  EXPECT_EQ(print_btor2(parse_btor2(std::string_view(text))), text);
}

TEST(Sat, UnsatUnderAssumptions) {
  sat::Solver s;
  const sat::Var a = s.new_var(), b = s.new_var();
  const sat::Lit la = sat::Lit::make(a), lb = sat::Lit::make(b);
  s.add_clause(std::vector<sat::Lit>{~la, lb});
  EXPECT_EQ(s.solve(), sat::Result::Sat);
  const std::vector<sat::Lit> as{la, ~lb};
  EXPECT_EQ(s.solve(as), sat::Result::Unsat);
  EXPECT_FALSE(s.conflict_assumptions().empty());
  const std::vector<sat::Lit> one{la};
  ASSERT_EQ(s.solve(one), sat::Result::Sat);
  EXPECT_TRUE(s.model_value(lb));
}

TEST(Sat, Pigeonhole) {
  sat::Solver s;
  const int n = 4;  // n+1 pigeons, n holes
  std::vector<std::vector<sat::Lit>> p(n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) p[i].push_back(sat::Lit::make(s.new_var()));
    s.add_clause(p[i]);
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= n; ++i)
      for (int k = i + 1; k <= n; ++k) s.add_clause(std::vector<sat::Lit>{~p[i][j], ~p[k][j]});
  EXPECT_EQ(s.solve(), sat::Result::Unsat);
}

TEST(Bitblast, Arithmetic) {
  TermManager tm;
  const Sort s = Sort::bv(5);
  Term x = tm.mk_var("x", s, VarRole::State), y = tm.mk_var("y", s, VarRole::State);
  EXPECT_FALSE(bv_check(tm.mk_eq(tm.mk_op(OpKind::Add, x, tm.mk_const(1, s)), x)).sat);
  Term q = tm.mk_and(tm.mk_eq(tm.mk_op(OpKind::Mul, x, y), tm.mk_const(6, s)),
                     tm.mk_op(OpKind::Ult, tm.mk_const(1, s), x));
  q = tm.mk_and(q, tm.mk_op(OpKind::Ult, x, y));
  const auto r = bv_check(q);
  ASSERT_TRUE(r.sat);
  EXPECT_EQ(eval_concrete(q, Env(r.model.begin(), r.model.end())), 1u);
}

TEST(Bitblast, UnsatCore) {
  TermManager tm;
  const Sort s = Sort::bv(3);
  Term x = tm.mk_var("x", s, VarRole::State), y = tm.mk_var("y", s, VarRole::State);
  const std::vector<Term> as{tm.mk_eq(y, tm.mk_const(2, s)), tm.mk_eq(x, tm.mk_const(0, s)),
                             tm.mk_op(OpKind::Ult, x, tm.mk_const(0, s))};
  const auto core = bv_unsat_core(tm.mk_true(), as, true);
  EXPECT_EQ(core, std::vector<std::size_t>{2});
  EXPECT_THROW(bv_unsat_core(tm.mk_true(), std::span(as).first(2)), NotUnsat);
}
