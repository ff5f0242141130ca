#include "dpmc/oracle.hpp"

#include <deque>
#include <random>

#include "dpmc/errors.hpp"

namespace dpmc {

ValidityVerdict bv_valid_exhaustive(Term t, unsigned max_bits) {
  Evaluator ev(std::span<const Term>(&t, 1));
  const auto& vars = ev.vars();
  unsigned bits = 0;
  for (Term v : vars) bits += v->sort.width;
  if (bits > max_bits)
    throw TooLarge("exhaustive check over " + std::to_string(bits) + " bits");
  ValidityVerdict out;
  const std::uint64_t n = std::uint64_t{1} << bits;
  for (std::uint64_t a = 0; a < n; ++a) {
    std::uint64_t rest = a;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const unsigned w = vars[i]->sort.width;
      ev.set(i, rest & vars[i]->sort.max_value());
      rest >>= w;
    }
    ev.run();
    if (ev.value(0) == 0) {
      out.valid = false;
      rest = a;
      for (Term v : vars) {
        out.counter_model[v->name] = rest & v->sort.max_value();
        rest >>= v->sort.width;
      }
      return out;
    }
  }
  return out;
}

ValidityVerdict bv_valid_exhaustive(
    const std::function<Term(TermManager&, unsigned)>& build,
    const std::vector<unsigned>& widths, unsigned max_bits) {
  for (unsigned w : widths) {
    TermManager tm;
    auto v = bv_valid_exhaustive(build(tm, w), max_bits);
    if (!v.valid) {
      v.width = w;
      return v;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

ReachVerdict bfs_reachability(const TransitionSystem& ts, unsigned max_bits) {
  const unsigned sbits = ts.state_bits(), ibits = ts.input_bits();
  if (sbits + ibits > max_bits)
    throw TooLarge("reachability over " + std::to_string(sbits + ibits) + " bits");
  std::vector<Term> roots{ts.init, ts.property};
  for (Term v : ts.state_vars) roots.push_back(ts.next.at(v));
  Evaluator ev(roots);
  std::vector<int> sidx, iidx;
  for (Term v : ts.state_vars) sidx.push_back(ev.var_index(v));
  for (Term v : ts.input_vars) iidx.push_back(ev.var_index(v));

  auto load = [&](std::uint64_t s, std::uint64_t in) {
    for (std::size_t k = 0; k < ts.state_vars.size(); ++k) {
      const Sort so = ts.state_vars[k]->sort;
      if (sidx[k] >= 0) ev.set(sidx[k], s & so.max_value());
      s >>= so.width;
    }
    for (std::size_t k = 0; k < ts.input_vars.size(); ++k) {
      const Sort so = ts.input_vars[k]->sort;
      if (iidx[k] >= 0) ev.set(iidx[k], in & so.max_value());
      in >>= so.width;
    }
    ev.run();
  };
  auto pack_next = [&]() {
    std::uint64_t s = 0;
    unsigned shift = 0;
    for (std::size_t k = 0; k < ts.state_vars.size(); ++k) {
      s |= ev.value(2 + k) << shift;
      shift += ts.state_vars[k]->sort.width;
    }
    return s;
  };
  auto to_step = [&](std::uint64_t s, std::uint64_t in) {
    ConcreteStep st;
    for (Term v : ts.state_vars) {
      st.state[v] = s & v->sort.max_value();
      s >>= v->sort.width;
    }
    for (Term v : ts.input_vars) {
      st.inputs[v] = in & v->sort.max_value();
      in >>= v->sort.width;
    }
    return st;
  };

  const std::uint64_t ns = std::uint64_t{1} << sbits, ni = std::uint64_t{1} << ibits;
  constexpr std::int64_t kUnseen = -2, kRoot = -1;
  std::vector<std::int64_t> parent(ns, kUnseen);
  std::vector<std::uint64_t> via(ns, 0);  // input used on the incoming edge
  std::deque<std::uint64_t> queue;
  for (std::uint64_t s = 0; s < ns; ++s)
    for (std::uint64_t in = 0; in < ni; ++in) {
      load(s, in);
      if (ev.value(0)) {
        parent[s] = kRoot;
        queue.push_back(s);
        break;
      }
    }

  ReachVerdict out;
  while (!queue.empty()) {
    const std::uint64_t s = queue.front();
    queue.pop_front();
    ++out.states_explored;
    for (std::uint64_t in = 0; in < ni; ++in) {
      load(s, in);
      if (!ev.value(1)) {
        out.reachable = true;
        std::vector<ConcreteStep> rev{to_step(s, in)};
        for (std::uint64_t cur = s; parent[cur] != kRoot;) {
          const auto p = static_cast<std::uint64_t>(parent[cur]);
          rev.push_back(to_step(p, via[cur]));
          cur = p;
        }
        out.trace.assign(rev.rbegin(), rev.rend());
        return out;
      }
      const std::uint64_t t = pack_next();
      if (parent[t] == kUnseen) {
        parent[t] = static_cast<std::int64_t>(s);
        via[t] = in;
        queue.push_back(t);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

OpMix OpMix::all() {
  OpMix m;
  for (OpKind op : kAllOpKinds)
    if (op != OpKind::Eq && op != OpKind::Neq) m.ops.insert(op);
  return m;
}

OpMix OpMix::no_shifts() {
  OpMix m = all();
  for (OpKind op : {OpKind::Sll, OpKind::Srl, OpKind::Sra, OpKind::Sla}) m.ops.erase(op);
  return m;
}

namespace {

class Generator {
 public:
  Generator(std::uint64_t seed, const OpMix& mix, TransitionSystem& ts)
      : rng_(seed), ts_(ts), tm_(*ts.tm) {
    for (OpKind op : mix.ops) {
      if (is_relational(op))
        rel_.push_back(op);
      else if (is_reduction(op))
        red_.push_back(op);
      else
        word_.push_back(op);
    }
    if (rel_.empty()) rel_.push_back(OpKind::Eq);
  }

  std::uint64_t pick(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  Term leaf(unsigned w) {
    std::vector<Term> cands;
    for (Term v : ts_.state_vars)
      if (v->sort.width == w) cands.push_back(v);
    for (Term v : ts_.input_vars)
      if (v->sort.width == w) cands.push_back(v);
    if (cands.empty() || pick(4) == 0) {
      const std::uint64_t c = pick(3) == 0 ? pick(std::uint64_t{1} << w) : pick(2);
      return tm_.mk_const(c, Sort::bv(w));
    }
    return cands[pick(cands.size())];
  }

  Term cond(unsigned depth) {
    const unsigned w = widths_[pick(widths_.size())];
    Term a = word(w, depth), b = word(w, depth);
    const OpKind op = rel_[pick(rel_.size())];
    if (op == OpKind::Eq || pick(4) == 0) return tm_.mk_eq(a, b);
    return tm_.mk_op(op, a, b);
  }

  Term word(unsigned w, unsigned depth) {
    if (depth == 0) return leaf(w);
    const auto choice = pick(10);
    if (choice < 3) return leaf(w);
    if (choice < 5) return tm_.mk_ite(cond(depth - 1), word(w, depth - 1), word(w, depth - 1));
    if (w == 1 && !red_.empty() && choice == 5) {
      const unsigned w2 = widths_[pick(widths_.size())];
      return tm_.mk_op(red_[pick(red_.size())], word(w2, depth - 1));
    }
    if (word_.empty()) return leaf(w);
    const OpKind op = word_[pick(word_.size())];
    if (op_arity(op) == 1) return tm_.mk_op(op, word(w, depth - 1));
    return tm_.mk_op(op, word(w, depth - 1), word(w, depth - 1));
  }

  std::vector<unsigned> widths_;

 private:
  std::mt19937_64 rng_;
  TransitionSystem& ts_;
  TermManager& tm_;
  std::vector<OpKind> rel_, red_, word_;
};

}  // namespace

TransitionSystem random_system(std::uint64_t seed, unsigned state_bits, const OpMix& mix) {
  if (state_bits == 0) state_bits = 1;
  TransitionSystem ts;
  Generator g(seed, mix, ts);
  auto& tm = *ts.tm;
  unsigned left = std::min(state_bits, 8u);
  const unsigned nvars = 1 + static_cast<unsigned>(g.pick(3));
  for (unsigned i = 0; i < nvars && left > 0; ++i) {
    unsigned w = 1 + static_cast<unsigned>(g.pick(std::min(left, 4u)));
    if (i + 1 == nvars || left - w == 0) w = std::min(left, w);
    left -= w;
    ts.state_vars.push_back(tm.mk_var("s" + std::to_string(i), Sort::bv(w), VarRole::State));
    g.widths_.push_back(w);
  }
  const unsigned iw = g.widths_[g.pick(g.widths_.size())];
  ts.input_vars.push_back(tm.mk_var("in0", Sort::bv(std::min(iw, 2u)), VarRole::Input));

  std::vector<Term> init;
  for (Term v : ts.state_vars) {
    if (g.pick(5) == 0) continue;  // unconstrained initial value
    const std::uint64_t c = g.pick(2) == 0 ? 0 : g.pick(v->sort.max_value() + 1);
    init.push_back(tm.mk_eq(v, tm.mk_const(c, v->sort)));
  }
  ts.init = tm.mk_and(init);
  for (Term v : ts.state_vars) ts.next.emplace(v, g.word(v->sort.width, 2));

  // Property over state variables only.
  const Term a = ts.state_vars[g.pick(ts.state_vars.size())];
  std::vector<Term> same;
  for (Term v : ts.state_vars)
    if (v->sort == a->sort && v != a) same.push_back(v);
  Term b = !same.empty() && g.pick(2) == 0
               ? same[g.pick(same.size())]
               : tm.mk_const(g.pick(a->sort.max_value() + 1), a->sort);
  Term prop;
  switch (g.pick(4)) {
    case 0: prop = tm.mk_op(OpKind::Ult, a, b); break;
    case 1: prop = tm.mk_op(OpKind::Ule, a, b); break;
    case 2: prop = tm.mk_eq(a, b); break;
    default: prop = tm.mk_not(tm.mk_eq(a, b)); break;
  }
  if (g.pick(3) == 0) prop = tm.mk_not(prop);
  ts.property = prop;
  ts.validate();
  return ts;
}

}  // namespace dpmc
