#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dpmc/term.hpp"

namespace dpmc {

/// Constant pattern of one argument of an application.
enum class ArgPat : std::uint8_t { Any, Zero, One, Max };

/// Semantic side condition that must be known to hold in the closure.
enum class SideCond : std::uint8_t { None, Arg0NeZero, Arg0NeMax, Arg1NeZero };

enum class Conclusion : std::uint8_t {
  EqArg0, EqArg1, EqZero, EqOne, EqMax,  // application equals ...
  PredTrue, PredFalse,                   // predicate decided
  Relational,                            // order-graph reasoning
};

/// One propagation rule. Local rules match a single application: argument
/// patterns, an optional "arguments equal" premise and a side condition.
/// Relational rules are applied through the order graph.
struct RuleDesc {
  std::string id;
  std::string text;
  OpKind op = OpKind::Add;
  ArgPat a0 = ArgPat::Any;
  ArgPat a1 = ArgPat::Any;
  bool args_equal = false;
  SideCond side = SideCond::None;
  Conclusion concl = Conclusion::EqArg0;
  unsigned only_width = 0;  // 0: every width
  /// Bit-level reading of the rule at a width, used for validation.
  std::function<Term(TermManager&, unsigned)> schema;
};

/// Schema of a local rule built from its descriptor.
Term local_rule_schema(const RuleDesc& r, TermManager& tm, unsigned width);

struct GateResult {
  std::string id;
  bool valid = true;
  unsigned width = 0;
  std::map<std::string, std::uint64_t> counter_model;
};

/// Registered rules. Every rule is validated exhaustively at widths 1..4
/// when the table is first built; rules that fail are not enabled.
class RuleTable {
 public:
  static const RuleTable& instance();

  const std::vector<RuleDesc>& rules() const { return rules_; }
  const std::vector<GateResult>& gate() const { return gate_; }
  bool enabled(const std::string& id) const;
  const RuleDesc* find(const std::string& id) const;
  /// Enabled local rules for an operation, in id order.
  const std::vector<const RuleDesc*>& local_rules(OpKind op) const;

  /// Rules in their originally typeset form that do not hold under the
  /// division-by-zero convention or bit semantics.
  static std::vector<RuleDesc> printed_variants();
  static std::vector<RuleDesc> registered();
  static GateResult validate(const RuleDesc& r);

 private:
  RuleTable();

  std::vector<RuleDesc> rules_;
  std::vector<GateResult> gate_;
  std::map<std::string, bool> enabled_;
  std::map<OpKind, std::vector<const RuleDesc*>> by_op_;
};

}  // namespace dpmc
