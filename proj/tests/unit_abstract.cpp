#include <gtest/gtest.h>

#include "dpmc/abstraction.hpp"
#include "dpmc/btor2.hpp"
#include "dpmc/congruence.hpp"
#include "dpmc/euf.hpp"
#include "support.hpp"

using namespace dpmc;

TEST(Abstraction, Fig2Symbols) {
  const auto ts = parse_btor2_file(test::data_path("fig2.btor2"));
  const auto sys = dp_abstract(ts);
  EXPECT_EQ(to_string(sys.prop), "LE(y,x)");
  EXPECT_EQ(to_string(sys.prop_next), "LE(y',x')");
  EXPECT_EQ(to_string(sys.init), "(x=0 & 0=y)");
  const SymSet s = symb(sys.trans);
  std::set<std::string> names;
  for (Sym f : s) names.insert(f->base);
  EXPECT_TRUE(names.count("ADD"));
  EXPECT_TRUE(names.count("LT"));
  EXPECT_TRUE(names.count("1"));
  EXPECT_EQ(to_string(sys.unprime(sys.prop_next)), "LE(y,x)");
}

TEST(Abstraction, GammaInvertsAlpha) {
  auto tm = std::make_shared<TermManager>();
  auto ctx = std::make_shared<AbstractContext>();
  AbstractionMap map(tm, ctx);
  const Sort s = Sort::bv(3);
  Term x = tm->mk_var("x", s, VarRole::State), y = tm->mk_var("y", s, VarRole::Input);
  Term t = tm->mk_op(OpKind::Ule, tm->mk_op(OpKind::Sub, x, tm->mk_const(7, s)),
                     tm->mk_op(OpKind::Srl, y, tm->mk_const(1, s)));
  t = tm->mk_or(t, tm->mk_eq(tm->mk_op(OpKind::RedXor, x), tm->mk_const(1, Sort::bv(1))));
  EXPECT_EQ(map.gamma(map.alpha(t)), t);
}

TEST(Congruence, MergesApplications) {
  test::Fixture f;
  ATerm x = f.var("x", 2), y = f.var("y", 2), z = f.var("z", 2);
  ATerm fx = f.app(OpKind::Add, {x, z}), fy = f.app(OpKind::Add, {y, z});
  CongruenceClosure cc(*f.ctx);
  cc.add(fx);
  cc.add(fy);
  EXPECT_FALSE(cc.equal(fx, fy));
  cc.merge(x, y, 7);
  EXPECT_TRUE(cc.equal(fx, fy));
  EXPECT_EQ(cc.explain(fx, fy), std::vector<int>{7});
  cc.merge(x, f.k(0, 2), 1);
  cc.merge(y, f.k(1, 2), 2);
  EXPECT_FALSE(cc.check());
  EXPECT_TRUE(cc.inconsistent());
}

TEST(Euf, CongruenceConflict) {
  test::Fixture f;
  ATerm x = f.var("x", 2), y = f.var("y", 2);
  ATerm q = f.ctx->mk_and({f.ctx->mk_eq(x, y), f.ctx->mk_not(f.ctx->mk_eq(f.app(OpKind::Mul, {x, x}),
                                                                           f.app(OpKind::Mul, {y, y})))});
  EXPECT_FALSE(euf_check(*f.ctx, q).sat);
}

TEST(Euf, PredicatesAreUninterpreted) {
  test::Fixture f;
  ATerm x = f.var("x", 2);
  ATerm q = f.ctx->mk_and(f.app(OpKind::Ult, {x, x}), f.ctx->mk_eq(x, f.k(0, 2)));
  EXPECT_TRUE(euf_check(*f.ctx, q).sat);
}

TEST(Euf, DistinctConstantsAndCore) {
  test::Fixture f;
  ATerm x = f.var("x", 2), y = f.var("y", 2);
  EufQuery q;
  q.phi.add_unit(f.ctx->mk_eq(x, y));
  q.assumptions = {f.ctx->mk_eq(x, f.k(0, 2)), f.app(OpKind::Ult, {x, y}), f.ctx->mk_eq(y, f.k(2, 2))};
  const auto r = euf_check(*f.ctx, q);
  ASSERT_FALSE(r.sat);
  EXPECT_EQ(r.core, (std::vector<std::size_t>{0, 2}));
}

TEST(Euf, ModelClasses) {
  test::Fixture f;
  ATerm x = f.var("x", 2), y = f.var("y", 2), z = f.var("z", 2);
  EufQuery q;
  q.phi.add_unit(f.ctx->mk_eq(x, f.k(1, 2)));
  q.phi.add({ALit{f.ctx->mk_eq(y, x), false}, ALit{f.ctx->mk_eq(z, x), false}});
  q.phi.add_unit(f.ctx->mk_eq(z, f.k(3, 2)));
  const auto r = euf_check(*f.ctx, q);
  ASSERT_TRUE(r.sat);
  EXPECT_TRUE(r.model.same_class(x, y));
  EXPECT_EQ(r.model.const_of(y), f.k(1, 2));
}
