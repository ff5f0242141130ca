#include <gtest/gtest.h>

#include "dpmc/rules.hpp"

using namespace dpmc;

TEST(Rules, EveryRegisteredRuleIsValid) {
  const auto& table = RuleTable::instance();
  EXPECT_EQ(table.rules().size(), 59u);
  for (const auto& g : table.gate()) {
    EXPECT_TRUE(g.valid) << g.id << " fails at width " << g.width;
    EXPECT_TRUE(table.enabled(g.id)) << g.id;
  }
}

TEST(Rules, PrintedVariantsHaveCounterModels) {
  const auto variants = RuleTable::printed_variants();
  ASSERT_EQ(variants.size(), 5u);
  for (const auto& r : variants) {
    const auto g = RuleTable::validate(r);
    EXPECT_FALSE(g.valid) << r.id;
    EXPECT_FALSE(g.counter_model.empty()) << r.id;
    std::cout << "[counter-model] " << r.id << " w=" << g.width;
    for (const auto& [v, val] : g.counter_model) std::cout << " " << v << "=" << val;
    std::cout << "\n";
  }
}

TEST(Rules, Lookup) {
  const auto& table = RuleTable::instance();
  ASSERT_NE(table.find("A04"), nullptr);
  EXPECT_EQ(table.find("A04")->op, OpKind::Sub);
  EXPECT_EQ(table.find("zz"), nullptr);
  for (const RuleDesc* r : table.local_rules(OpKind::Udiv)) EXPECT_EQ(r->op, OpKind::Udiv);
}
