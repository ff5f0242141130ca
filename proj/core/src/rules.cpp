#include "dpmc/rules.hpp"

#include <algorithm>

#include "dpmc/oracle.hpp"

namespace dpmc {

namespace {

Term pattern(TermManager& tm, ArgPat p, Term var) {
  const Sort s = var->sort;
  switch (p) {
    case ArgPat::Any: return var;
    case ArgPat::Zero: return tm.mk_const(0, s);
    case ArgPat::One: return tm.mk_const(1, s);
    case ArgPat::Max: return tm.mk_const(s.max_value(), s);
  }
  return var;
}

RuleDesc local(std::string id, std::string text, OpKind op, ArgPat a0, ArgPat a1,
               Conclusion c) {
  RuleDesc r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.op = op;
  r.a0 = a0;
  r.a1 = a1;
  r.concl = c;
  return r;
}

RuleDesc eq_args(std::string id, std::string text, OpKind op, Conclusion c) {
  RuleDesc r = local(std::move(id), std::move(text), op, ArgPat::Any, ArgPat::Any, c);
  r.args_equal = true;
  return r;
}

RuleDesc guarded(RuleDesc r, SideCond s) {
  r.side = s;
  return r;
}

RuleDesc unary(std::string id, std::string text, OpKind op, SideCond s, Conclusion c,
               unsigned only_width = 0) {
  RuleDesc r = local(std::move(id), std::move(text), op, ArgPat::Any, ArgPat::Any, c);
  r.side = s;
  r.only_width = only_width;
  return r;
}

using Schema = std::function<Term(TermManager&, Term, Term, Term)>;

RuleDesc relational(std::string id, std::string text, OpKind op, Schema body) {
  RuleDesc r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.op = op;
  r.concl = Conclusion::Relational;
  r.schema = [body](TermManager& tm, unsigned w) {
    const Sort s = Sort::bv(w);
    Term x = tm.mk_var("x", s, VarRole::Input);
    Term y = tm.mk_var("y", s, VarRole::Input);
    Term z = tm.mk_var("z", s, VarRole::Input);
    return body(tm, x, y, z);
  };
  return r;
}

void finish(std::vector<RuleDesc>& rs) {
  for (auto& r : rs)
    if (!r.schema)
      r.schema = [r](TermManager& tm, unsigned w) { return local_rule_schema(r, tm, w); };
}

}  // namespace

Term local_rule_schema(const RuleDesc& r, TermManager& tm, unsigned width) {
  if (r.only_width != 0 && width != r.only_width) return tm.mk_true();
  const Sort s = Sort::bv(width);
  Term x = tm.mk_var("x", s, VarRole::Input);
  Term y = tm.mk_var("y", s, VarRole::Input);
  Term a0 = pattern(tm, r.a0, x);
  Term a1 = pattern(tm, r.a1, y);
  std::vector<Term> premises;
  if (r.args_equal) premises.push_back(tm.mk_eq(a0, a1));
  switch (r.side) {
    case SideCond::None: break;
    case SideCond::Arg0NeZero: premises.push_back(tm.mk_not(tm.mk_eq(a0, tm.mk_const(0, s)))); break;
    case SideCond::Arg0NeMax:
      premises.push_back(tm.mk_not(tm.mk_eq(a0, tm.mk_const(s.max_value(), s))));
      break;
    case SideCond::Arg1NeZero: premises.push_back(tm.mk_not(tm.mk_eq(a1, tm.mk_const(0, s)))); break;
  }
  Term app = op_arity(r.op) == 1 ? tm.mk_op(r.op, a0) : tm.mk_op(r.op, a0, a1);
  const Sort rs = app->sort.is_bool() ? s : app->sort;
  Term concl = nullptr;
  switch (r.concl) {
    case Conclusion::EqArg0: concl = tm.mk_eq(app, a0); break;
    case Conclusion::EqArg1: concl = tm.mk_eq(app, a1); break;
    case Conclusion::EqZero: concl = tm.mk_eq(app, tm.mk_const(0, rs)); break;
    case Conclusion::EqOne: concl = tm.mk_eq(app, tm.mk_const(1, rs)); break;
    case Conclusion::EqMax: concl = tm.mk_eq(app, tm.mk_const(rs.max_value(), rs)); break;
    case Conclusion::PredTrue: concl = app; break;
    case Conclusion::PredFalse: concl = tm.mk_not(app); break;
    case Conclusion::Relational: concl = tm.mk_true(); break;
  }
  if (premises.empty()) return concl;
  return tm.mk_implies(tm.mk_and(premises), concl);
}

std::vector<RuleDesc> RuleTable::registered() {
  constexpr auto A = ArgPat::Any, Z = ArgPat::Zero, O = ArgPat::One, M = ArgPat::Max;
  using C = Conclusion;
  using K = OpKind;
  std::vector<RuleDesc> rs{
      local("A01", "ADD(x,0)=x", K::Add, A, Z, C::EqArg0),
      local("A02", "ADD(0,y)=y", K::Add, Z, A, C::EqArg1),
      local("A03", "SUB(x,0)=x", K::Sub, A, Z, C::EqArg0),
      eq_args("A04", "x=y -> SUB(x,y)=0", K::Sub, C::EqZero),
      local("A05", "MUL(x,0)=0", K::Mul, A, Z, C::EqZero),
      local("A06", "MUL(0,y)=0", K::Mul, Z, A, C::EqZero),
      local("A07", "MUL(x,1)=x", K::Mul, A, O, C::EqArg0),
      local("A08", "MUL(1,y)=y", K::Mul, O, A, C::EqArg1),
      guarded(eq_args("A09", "x=y & y!=0 -> DIV(x,y)=1", K::Udiv, C::EqOne), SideCond::Arg1NeZero),
      guarded(local("A10", "y!=0 -> DIV(0,y)=0", K::Udiv, Z, A, C::EqZero), SideCond::Arg1NeZero),
      local("A11", "MOD(x,1)=0", K::Urem, A, O, C::EqZero),
      local("A12", "MOD(0,y)=0", K::Urem, Z, A, C::EqZero),
      eq_args("A13", "x=y -> MOD(x,y)=0", K::Urem, C::EqZero),

      local("B01", "BitWiseAnd(x,0)=0", K::And, A, Z, C::EqZero),
      local("B02", "BitWiseAnd(0,y)=0", K::And, Z, A, C::EqZero),
      local("B03", "BitWiseAnd(x,MAX)=x", K::And, A, M, C::EqArg0),
      local("B04", "BitWiseAnd(MAX,y)=y", K::And, M, A, C::EqArg1),
      eq_args("B05", "x=y -> BitWiseAnd(x,y)=x", K::And, C::EqArg0),
      local("B06", "BitWiseOr(x,0)=x", K::Or, A, Z, C::EqArg0),
      local("B07", "BitWiseOr(0,y)=y", K::Or, Z, A, C::EqArg1),
      local("B08", "BitWiseOr(x,MAX)=MAX", K::Or, A, M, C::EqMax),
      local("B09", "BitWiseOr(MAX,y)=MAX", K::Or, M, A, C::EqMax),
      eq_args("B10", "x=y -> BitWiseOr(x,y)=x", K::Or, C::EqArg0),
      local("B11", "BitWiseNor(MAX,y)=0", K::Nor, M, A, C::EqZero),
      local("B12", "BitWiseNor(x,MAX)=0", K::Nor, A, M, C::EqZero),
      local("B13", "BitWiseNAnd(x,0)=MAX", K::Nand, A, Z, C::EqMax),
      local("B14", "BitWiseNAnd(0,y)=MAX", K::Nand, Z, A, C::EqMax),
      eq_args("B15", "x=y -> BitWiseXor(x,y)=0", K::Xor, C::EqZero),
      eq_args("B16", "x=y -> BitWiseXNor(x,y)=MAX", K::Xnor, C::EqMax),

      unary("D01", "x!=MAX -> ReductionAnd(x)=0", K::RedAnd, SideCond::Arg0NeMax, C::EqZero),
      unary("D02", "x!=0 -> ReductionOr(x)=1", K::RedOr, SideCond::Arg0NeZero, C::EqOne),
      unary("D03", "x!=0 -> ReductionNor(x)=0", K::RedNor, SideCond::Arg0NeZero, C::EqZero),
      unary("D04", "x!=MAX -> ReductionNAnd(x)=1", K::RedNand, SideCond::Arg0NeMax, C::EqOne),
      unary("D05", "x!=MAX -> ReductionXNor(x)=1 (width 1)", K::RedXnor, SideCond::Arg0NeMax,
            C::EqOne, 1),

      local("S01", "ShiftL(x,0)=x", K::Sll, A, Z, C::EqArg0),
      local("S02", "ShiftL(0,y)=0", K::Sll, Z, A, C::EqZero),
      local("S03", "ShiftR(x,0)=x", K::Srl, A, Z, C::EqArg0),
      local("S04", "ShiftR(0,y)=0", K::Srl, Z, A, C::EqZero),
      local("S05", "AShiftL(x,0)=x", K::Sla, A, Z, C::EqArg0),
      local("S06", "AShiftL(0,y)=0", K::Sla, Z, A, C::EqZero),
      local("S07", "AShiftR(x,0)=x", K::Sra, A, Z, C::EqArg0),
      local("S08", "AShiftR(0,y)=0", K::Sra, Z, A, C::EqZero),

      eq_args("R01", "x=y -> !LT(x,y)", K::Ult, C::PredFalse),
      local("R02", "!LT(x,0)", K::Ult, A, Z, C::PredFalse),
      local("R03", "LE(0,y)", K::Ule, Z, A, C::PredTrue),
      eq_args("R04", "x=y -> LE(x,y)", K::Ule, C::PredTrue),
  };
  auto lt = [](TermManager& tm, Term a, Term b) { return tm.mk_op(OpKind::Ult, a, b); };
  auto le = [](TermManager& tm, Term a, Term b) { return tm.mk_op(OpKind::Ule, a, b); };
  auto imp = [](TermManager& tm, Term a, Term b) { return tm.mk_implies(a, b); };
  auto both = [](TermManager& tm, Term a, Term b) { return tm.mk_and(a, b); };
  rs.push_back(relational("R05", "LE(x,y) -> !LT(y,x)", K::Ule, [=](TermManager& tm, Term x, Term y, Term) {
    return imp(tm, le(tm, x, y), tm.mk_not(lt(tm, y, x)));
  }));
  rs.push_back(relational("R06", "LT(x,y) -> !LE(y,x)", K::Ult, [=](TermManager& tm, Term x, Term y, Term) {
    return imp(tm, lt(tm, x, y), tm.mk_not(le(tm, y, x)));
  }));
  rs.push_back(relational("R07", "LT(x,y) -> LE(x,y)", K::Ult, [=](TermManager& tm, Term x, Term y, Term) {
    return imp(tm, lt(tm, x, y), le(tm, x, y));
  }));
  rs.push_back(relational("R08", "LT(x,y) & LT(y,z) -> LT(x,z)", K::Ult,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, lt(tm, x, y), lt(tm, y, z)), lt(tm, x, z));
                          }));
  rs.push_back(relational("R09", "LT(x,y) & LE(y,z) -> LT(x,z)", K::Ult,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, lt(tm, x, y), le(tm, y, z)), lt(tm, x, z));
                          }));
  rs.push_back(relational("R10", "LE(x,y) & LT(y,z) -> LT(x,z)", K::Ult,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, le(tm, x, y), lt(tm, y, z)), lt(tm, x, z));
                          }));
  rs.push_back(relational("R11", "LE(x,y) & LE(y,z) -> LE(x,z)", K::Ule,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, le(tm, x, y), le(tm, y, z)), le(tm, x, z));
                          }));
  rs.push_back(relational("R12", "LT(x,y) & LT(y,z) -> !LE(z,x)", K::Ule,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, lt(tm, x, y), lt(tm, y, z)),
                                       tm.mk_not(le(tm, z, x)));
                          }));
  rs.push_back(relational("R13", "LE(x,y) & LT(y,z) -> !LE(z,x)", K::Ule,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, le(tm, x, y), lt(tm, y, z)),
                                       tm.mk_not(le(tm, z, x)));
                          }));
  rs.push_back(relational("R14", "LE(x,y) & LE(y,z) -> !LT(z,x)", K::Ult,
                          [=](TermManager& tm, Term x, Term y, Term z) {
                            return imp(tm, both(tm, le(tm, x, y), le(tm, y, z)),
                                       tm.mk_not(lt(tm, z, x)));
                          }));
  rs.push_back(relational("R15", "!LT(x,y) -> LE(y,x)", K::Ult, [=](TermManager& tm, Term x, Term y, Term) {
    return imp(tm, tm.mk_not(lt(tm, x, y)), le(tm, y, x));
  }));
  rs.push_back(relational("R16", "!LE(x,y) -> LT(y,x)", K::Ule, [=](TermManager& tm, Term x, Term y, Term) {
    return imp(tm, tm.mk_not(le(tm, x, y)), lt(tm, y, x));
  }));
  rs.push_back(relational("R17", "LE(x,y) & LE(y,x) -> x=y", K::Ule, [=](TermManager& tm, Term x, Term y, Term) {
    return imp(tm, both(tm, le(tm, x, y), le(tm, y, x)), tm.mk_eq(x, y));
  }));
  finish(rs);
  return rs;
}

std::vector<RuleDesc> RuleTable::printed_variants() {
  using C = Conclusion;
  using K = OpKind;
  std::vector<RuleDesc> rs{
      eq_args("A09*", "x=y -> DIV(x,y)=1", K::Udiv, C::EqOne),
      local("A10*", "DIV(0,y)=0", K::Udiv, ArgPat::Zero, ArgPat::Any, C::EqZero),
      unary("D03*", "x!=0 -> ReductionNor(x)=1", K::RedNor, SideCond::Arg0NeZero, C::EqOne),
      unary("D04*", "x!=MAX -> ReductionNAnd(x)=0", K::RedNand, SideCond::Arg0NeMax, C::EqZero),
      unary("D05*", "x!=MAX -> ReductionXNor(x)=1", K::RedXnor, SideCond::Arg0NeMax, C::EqOne),
  };
  finish(rs);
  return rs;
}

GateResult RuleTable::validate(const RuleDesc& r) {
  GateResult g;
  g.id = r.id;
  const auto v = bv_valid_exhaustive(r.schema, {1, 2, 3, 4});
  g.valid = v.valid;
  g.width = v.width;
  g.counter_model = v.counter_model;
  return g;
}

RuleTable::RuleTable() : rules_(registered()) {
  for (const auto& r : rules_) {
    gate_.push_back(validate(r));
    enabled_[r.id] = gate_.back().valid;
  }
  for (const auto& r : rules_)
    if (enabled_[r.id] && r.concl != Conclusion::Relational) by_op_[r.op].push_back(&r);
}

const RuleTable& RuleTable::instance() {
  static const RuleTable table;
  return table;
}

bool RuleTable::enabled(const std::string& id) const {
  auto it = enabled_.find(id);
  return it != enabled_.end() && it->second;
}

const RuleDesc* RuleTable::find(const std::string& id) const {
  for (const auto& r : rules_)
    if (r.id == id) return &r;
  return nullptr;
}

const std::vector<const RuleDesc*>& RuleTable::local_rules(OpKind op) const {
  static const std::vector<const RuleDesc*> none;
  auto it = by_op_.find(op);
  return it == by_op_.end() ? none : it->second;
}

}  // namespace dpmc
