#include "dpmc/bitblast.hpp"

#include <algorithm>
#include <unordered_map>

#include "dpmc/errors.hpp"
#include "dpmc/sat.hpp"

namespace dpmc {

namespace {

using sat::Lit;
using Bits = std::vector<Lit>;

class BitBlaster {
 public:
  explicit BitBlaster(sat::Solver& s) : s_(s) {
    tt_ = Lit::make(s_.new_var());
    s_.add_clause({tt_});
  }

  Lit lit(Term t) { return blast(t)[0]; }

  const Bits& blast(Term root) {
    for (Term t : topo_order(std::span<const Term>(&root, 1))) {
      if (!cache_.count(t)) cache_.emplace(t, encode(t));
    }
    return cache_.at(root);
  }

  std::uint64_t value_of(Term var) const {
    const Bits& b = cache_.at(var);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (s_.model_value(b[i])) v |= std::uint64_t{1} << i;
    return v;
  }

 private:
  Lit ff() const { return ~tt_; }
  Lit fresh() { return Lit::make(s_.new_var()); }

  Lit and2(Lit a, Lit b) {
    if (a == ff() || b == ff() || a == ~b) return ff();
    if (a == tt_) return b;
    if (b == tt_ || a == b) return a;
    Lit o = fresh();
    s_.add_clause({~o, a});
    s_.add_clause({~o, b});
    s_.add_clause({o, ~a, ~b});
    return o;
  }
  Lit or2(Lit a, Lit b) { return ~and2(~a, ~b); }
  Lit xor2(Lit a, Lit b) {
    if (a == ff()) return b;
    if (b == ff()) return a;
    if (a == tt_) return ~b;
    if (b == tt_) return ~a;
    if (a == b) return ff();
    if (a == ~b) return tt_;
    Lit o = fresh();
    s_.add_clause({~o, a, b});
    s_.add_clause({~o, ~a, ~b});
    s_.add_clause({o, ~a, b});
    s_.add_clause({o, a, ~b});
    return o;
  }
  Lit mux(Lit c, Lit t, Lit e) {
    if (c == tt_ || t == e) return t;
    if (c == ff()) return e;
    Lit o = fresh();
    s_.add_clause({~c, ~t, o});
    s_.add_clause({~c, t, ~o});
    s_.add_clause({c, ~e, o});
    s_.add_clause({c, e, ~o});
    return o;
  }
  Lit and_n(const Bits& xs) {
    Lit r = tt_;
    for (Lit x : xs) r = and2(r, x);
    return r;
  }
  Lit or_n(const Bits& xs) {
    Lit r = ff();
    for (Lit x : xs) r = or2(r, x);
    return r;
  }

  Bits add(const Bits& a, const Bits& b, Lit carry) {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Lit axb = xor2(a[i], b[i]);
      r[i] = xor2(axb, carry);
      carry = or2(and2(a[i], b[i]), and2(axb, carry));
    }
    return r;
  }
  Bits negate_bits(const Bits& a) {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ~a[i];
    return r;
  }
  Bits mul(const Bits& a, const Bits& b) {
    const std::size_t w = a.size();
    Bits acc(w, ff());
    for (std::size_t i = 0; i < w; ++i) {
      Bits partial(w, ff());
      for (std::size_t j = 0; i + j < w; ++j) partial[i + j] = and2(a[j], b[i]);
      acc = add(acc, partial, ff());
    }
    return acc;
  }
  Lit eq(const Bits& a, const Bits& b) {
    Bits xs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) xs[i] = ~xor2(a[i], b[i]);
    return and_n(xs);
  }
  // a < b (strict) or a <= b, unsigned.
  Lit less(const Bits& a, const Bits& b, bool strict) {
    Lit lt = strict ? ff() : tt_;
    for (std::size_t i = 0; i < a.size(); ++i) {
      // From LSB upwards: decided by the highest differing bit.
      const Lit diff = xor2(a[i], b[i]);
      lt = mux(diff, b[i], lt);
    }
    return lt;
  }
  Bits shift(const Bits& a, const Bits& b, OpKind op) {
    const std::size_t w = a.size();
    const Lit fill = op == OpKind::Sra ? a[w - 1] : ff();
    Bits r = a;
    std::size_t stage = 0;
    for (; stage < w && (std::size_t{1} << stage) < w; ++stage) {
      const std::size_t k = std::size_t{1} << stage;
      Bits next(w);
      for (std::size_t i = 0; i < w; ++i) {
        Lit moved;
        if (op == OpKind::Sll || op == OpKind::Sla)
          moved = i >= k ? r[i - k] : ff();
        else
          moved = i + k < w ? r[i + k] : fill;
        next[i] = mux(b[stage], moved, r[i]);
      }
      r = std::move(next);
    }
    // Any higher shift-amount bit set means the amount is at least w.
    Bits high(b.begin() + static_cast<long>(stage), b.end());
    const Lit over = or_n(high);
    for (auto& x : r) x = mux(over, fill, x);
    return r;
  }
  void divide(const Bits& a, const Bits& b, Bits& q, Bits& r) {
    const std::size_t w = a.size();
    q.resize(w);
    r.resize(w);
    for (auto& x : q) x = fresh();
    for (auto& x : r) x = fresh();
    const Lit bz = ~or_n(b);
    // b = 0: q = all ones, r = a.
    for (std::size_t i = 0; i < w; ++i) {
      s_.add_clause({~bz, q[i]});
      s_.add_clause({~bz, ~r[i], a[i]});
      s_.add_clause({~bz, r[i], ~a[i]});
    }
    // b != 0: a = q*b + r without overflow and r < b.
    auto ext = [&](const Bits& x) {
      Bits e = x;
      e.resize(2 * w, ff());
      return e;
    };
    const Bits prod = add(mul(ext(q), ext(b)), ext(r), ff());
    s_.add_clause({bz, eq(prod, ext(a))});
    s_.add_clause({bz, less(r, b, true)});
  }

  Bits encode(Term t) {
    auto arg = [&](std::size_t i) -> const Bits& { return cache_.at(t->args[i]); };
    const unsigned w = t->sort.width;
    switch (t->kind) {
      case NodeKind::Const: {
        Bits r(w);
        for (unsigned i = 0; i < w; ++i) r[i] = (t->value >> i) & 1 ? tt_ : ff();
        return r;
      }
      case NodeKind::Var: {
        Bits r(w);
        for (auto& x : r) x = fresh();
        return r;
      }
      case NodeKind::Not: return {~arg(0)[0]};
      case NodeKind::And: {
        Bits xs;
        for (std::size_t i = 0; i < t->args.size(); ++i) xs.push_back(arg(i)[0]);
        return {and_n(xs)};
      }
      case NodeKind::Or: {
        Bits xs;
        for (std::size_t i = 0; i < t->args.size(); ++i) xs.push_back(arg(i)[0]);
        return {or_n(xs)};
      }
      case NodeKind::Ite: {
        Bits r(w);
        for (unsigned i = 0; i < w; ++i) r[i] = mux(arg(0)[0], arg(1)[i], arg(2)[i]);
        return r;
      }
      case NodeKind::Op: break;
    }
    const Bits& a = arg(0);
    const Bits empty;
    const Bits& b = t->args.size() > 1 ? arg(1) : empty;
    Bits r;
    switch (t->op) {
      case OpKind::Add: return add(a, b, ff());
      case OpKind::Sub: return add(a, negate_bits(b), tt_);
      case OpKind::Mul: return mul(a, b);
      case OpKind::Udiv:
      case OpKind::Urem: {
        Bits q, rem;
        divide(a, b, q, rem);
        return t->op == OpKind::Udiv ? q : rem;
      }
      case OpKind::Ult: return {less(a, b, true)};
      case OpKind::Ule: return {less(a, b, false)};
      case OpKind::Eq: return {eq(a, b)};
      case OpKind::Neq: return {~eq(a, b)};
      case OpKind::Not: return negate_bits(a);
      case OpKind::And:
      case OpKind::Or:
      case OpKind::Xor:
      case OpKind::Nand:
      case OpKind::Nor:
      case OpKind::Xnor:
        r.resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
          switch (t->op) {
            case OpKind::And: r[i] = and2(a[i], b[i]); break;
            case OpKind::Or: r[i] = or2(a[i], b[i]); break;
            case OpKind::Xor: r[i] = xor2(a[i], b[i]); break;
            case OpKind::Nand: r[i] = ~and2(a[i], b[i]); break;
            case OpKind::Nor: r[i] = ~or2(a[i], b[i]); break;
            default: r[i] = ~xor2(a[i], b[i]); break;
          }
        }
        return r;
      case OpKind::RedAnd: return {and_n(a)};
      case OpKind::RedNand: return {~and_n(a)};
      case OpKind::RedOr: return {or_n(a)};
      case OpKind::RedNor: return {~or_n(a)};
      case OpKind::RedXor:
      case OpKind::RedXnor: {
        Lit x = ff();
        for (Lit l : a) x = xor2(x, l);
        return {t->op == OpKind::RedXor ? x : ~x};
      }
      case OpKind::Sll:
      case OpKind::Srl:
      case OpKind::Sra:
      case OpKind::Sla: return shift(a, b, t->op);
    }
    return r;
  }

  sat::Solver& s_;
  Lit tt_;
  std::unordered_map<Term, Bits> cache_;
};

sat::Result run(sat::Solver& s, std::span<const Lit> assumptions,
                const BvOptions& opts) {
  const auto r = s.solve(assumptions, opts.conflict_budget);
  if (r == sat::Result::Unknown)
    throw ResourceLimit("bit-vector query exceeded its conflict budget");
  return r;
}

}  // namespace

BvResult bv_check(Term t, const BvOptions& opts) {
  if (!t->sort.is_bool()) throw SortMismatch("bv_check expects a boolean term");
  sat::Solver s;
  BitBlaster bb(s);
  const Lit root = bb.lit(t);
  s.add_clause({root});
  BvResult res;
  if (run(s, {}, opts) == sat::Result::Unsat) return res;
  res.sat = true;
  for (Term v : free_vars(t)) res.model.emplace(v, bb.value_of(v));
  return res;
}

std::vector<std::size_t> bv_unsat_core(Term t, std::span<const Term> assumptions,
                                       bool minimize, const BvOptions& opts) {
  sat::Solver s;
  BitBlaster bb(s);
  s.add_clause({bb.lit(t)});
  // Each assumption is guarded by a selector literal.
  std::vector<Lit> sel;
  std::unordered_map<int, std::size_t> index_of;
  for (std::size_t i = 0; i < assumptions.size(); ++i) {
    const Lit a = bb.lit(assumptions[i]);
    const Lit l = Lit::make(s.new_var());
    s.add_clause({~l, a});
    index_of.emplace(l.x, i);
    sel.push_back(l);
  }
  if (run(s, sel, opts) == sat::Result::Sat)
    throw NotUnsat("bv_unsat_core: query is satisfiable");
  std::vector<Lit> core = s.conflict_assumptions();
  if (minimize) {
    for (std::size_t i = 0; i < core.size();) {
      std::vector<Lit> trial;
      for (std::size_t j = 0; j < core.size(); ++j)
        if (j != i) trial.push_back(core[j]);
      if (run(s, trial, opts) == sat::Result::Unsat) {
        // Keep the solver's (possibly smaller) core but preserve order.
        const auto& fc = s.conflict_assumptions();
        std::vector<Lit> next;
        for (Lit l : trial)
          if (std::find(fc.begin(), fc.end(), l) != fc.end()) next.push_back(l);
        core = std::move(next);
        i = std::min(i, core.size());
      } else {
        ++i;
      }
    }
  }
  std::vector<std::size_t> out;
  for (Lit l : core) out.push_back(index_of.at(l.x));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dpmc
