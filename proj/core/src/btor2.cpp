#include "dpmc/btor2.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dpmc/errors.hpp"

namespace dpmc {

namespace {

const std::set<std::string, std::less<>> kRejected = {
    "array", "concat", "slice", "uext", "sext", "slt", "slte", "sgt", "sgte",
    "sdiv", "srem", "smod", "saddo", "uaddo", "sdivo", "smulo", "umulo",
    "ssubo", "usubo", "rol", "ror", "read", "write", "neg", "inc", "dec",
    "implies", "iff", "ugt", "ugte", "constraint", "fair", "justice",
    "output"};

const std::unordered_map<std::string, OpKind> kBinary = {
    {"add", OpKind::Add},   {"sub", OpKind::Sub},   {"mul", OpKind::Mul},
    {"udiv", OpKind::Udiv}, {"urem", OpKind::Urem}, {"ult", OpKind::Ult},
    {"ulte", OpKind::Ule},  {"sll", OpKind::Sll},   {"srl", OpKind::Srl},
    {"sra", OpKind::Sra},
};

const std::unordered_map<std::string, OpKind> kLogic = {
    {"and", OpKind::And},   {"or", OpKind::Or},    {"xor", OpKind::Xor},
    {"nand", OpKind::Nand}, {"nor", OpKind::Nor},  {"xnor", OpKind::Xnor},
};

const std::unordered_map<std::string, OpKind> kReduce = {
    {"redand", OpKind::RedAnd}, {"redor", OpKind::RedOr},
    {"redxor", OpKind::RedXor},
};

class Parser {
 public:
  explicit Parser(TransitionSystem& ts) : ts_(ts), tm_(*ts.tm) {}

  void line(std::size_t lineno, const std::string& raw) {
    lineno_ = lineno;
    std::string text = raw.substr(0, raw.find(';'));
    std::istringstream is(text);
    std::vector<std::string> tok;
    for (std::string w; is >> w;) tok.push_back(w);
    if (tok.empty()) return;
    const long id = to_id(tok[0]);
    if (id <= 0) fail("node id must be positive");
    if (tok.size() < 2) fail("missing node kind");
    const std::string& kind = tok[1];
    if (sorts_.count(id) || nodes_.count(id)) fail("duplicate node id");

    if (kind == "sort") {
      need(tok, 4);
      if (tok[2] == "array") throw UnsupportedFeature(lineno_, "array");
      if (tok[2] != "bitvec") fail("unknown sort '" + tok[2] + "'");
      const long w = to_id(tok[3]);
      if (w < 1) fail("bit-vector width must be positive");
      if (w > 64) throw UnsupportedFeature(lineno_, "bitvec wider than 64");
      sorts_[id] = Sort::bv(static_cast<unsigned>(w));
      return;
    }
    if (kRejected.count(kind)) throw UnsupportedFeature(lineno_, kind);

    if (kind == "const" || kind == "constd" || kind == "consth") {
      need(tok, 4);
      const Sort s = sort(tok[2]);
      const int base = kind == "const" ? 2 : kind == "constd" ? 10 : 16;
      std::uint64_t v = 0;
      try {
        std::size_t pos = 0;
        v = std::stoull(tok[3], &pos, base);
        if (pos != tok[3].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        fail("malformed constant '" + tok[3] + "'");
      }
      if (v > s.max_value()) fail("constant does not fit its sort");
      def(id, tm_.mk_const(v, s));
    } else if (kind == "zero" || kind == "one" || kind == "ones") {
      need(tok, 3);
      const Sort s = sort(tok[2]);
      const std::uint64_t v =
          kind == "zero" ? 0 : kind == "one" ? 1 : s.max_value();
      def(id, tm_.mk_const(v, s));
    } else if (kind == "state" || kind == "input") {
      need(tok, 3);
      const Sort s = sort(tok[2]);
      std::string name = tok.size() > 3 ? tok[3] : (kind[0] + std::to_string(id));
      if (tm_.find_var(name)) name += "#" + std::to_string(id);
      const bool state = kind == "state";
      Term v = tm_.mk_var(name, s, state ? VarRole::State : VarRole::Input);
      (state ? ts_.state_vars : ts_.input_vars).push_back(v);
      def(id, v);
    } else if (kind == "init" || kind == "next") {
      need(tok, 5);
      const Sort s = sort(tok[2]);
      Term var = node(tok[3]);
      if (!var->is_var() || var->role != VarRole::State)
        fail(kind + " target is not a state");
      if (!(var->sort == s)) fail(kind + " sort mismatch");
      Term val = coerce(node(tok[4]), s);
      auto& table = kind == "init" ? inits_ : ts_.next;
      if (table.count(var)) fail("duplicate " + kind + " for state");
      table[var] = val;
    } else if (kind == "bad") {
      need(tok, 3);
      if (bad_) throw UnsupportedFeature(lineno_, "multiple bad properties");
      bad_ = as_bool(node(tok[2]));
    } else if (kind == "not") {
      need(tok, 4);
      const Sort s = sort(tok[2]);
      Term a = node(tok[3]);
      if (a->sort.is_bool() && s.width == 1)
        def(id, tm_.mk_not(a));
      else
        def(id, tm_.mk_op(OpKind::Not, coerce(a, s)));
    } else if (auto it = kLogic.find(kind); it != kLogic.end()) {
      need(tok, 5);
      const Sort s = sort(tok[2]);
      Term a = node(tok[3]), b = node(tok[4]);
      if (a->sort.is_bool() && b->sort.is_bool() && s.width == 1)
        def(id, bool_logic(it->second, a, b));
      else
        def(id, tm_.mk_op(it->second, coerce(a, s), coerce(b, s)));
    } else if (auto it = kReduce.find(kind); it != kReduce.end()) {
      need(tok, 4);
      sort(tok[2]);
      Term a = node(tok[3]);
      if (a->sort.is_bool()) a = as_bv1(a);
      def(id, tm_.mk_op(it->second, a));
    } else if (auto it = kBinary.find(kind); it != kBinary.end()) {
      need(tok, 5);
      sort(tok[2]);
      Term a = node(tok[3]), b = node(tok[4]);
      if (a->sort.is_bool()) a = as_bv1(a);
      if (b->sort.is_bool()) b = as_bv1(b);
      def(id, checked(it->second, a, b));
    } else if (kind == "eq" || kind == "neq") {
      need(tok, 5);
      sort(tok[2]);
      Term a = node(tok[3]), b = node(tok[4]);
      if (a->sort.is_bool() != b->sort.is_bool()) {
        a = a->sort.is_bool() ? as_bv1(a) : a;
        b = b->sort.is_bool() ? as_bv1(b) : b;
      }
      def(id, checked(kind == "eq" ? OpKind::Eq : OpKind::Neq, a, b));
    } else if (kind == "ite") {
      need(tok, 6);
      const Sort s = sort(tok[2]);
      Term c = as_bool(node(tok[3]));
      Term t = node(tok[4]), e = node(tok[5]);
      if (!(t->sort.is_bool() && e->sort.is_bool())) {
        t = coerce(t, s);
        e = coerce(e, s);
      }
      def(id, tm_.mk_ite(c, t, e));
    } else {
      throw UnsupportedFeature(lineno_, kind);
    }
  }

  void finish() {
    if (!bad_) throw ParseError(lineno_, "missing property (no bad node)");
    std::vector<Term> init_eqs;
    for (Term v : ts_.state_vars) {
      if (auto it = inits_.find(v); it != inits_.end())
        init_eqs.push_back(tm_.mk_eq(v, it->second));
      if (!ts_.next.count(v)) {
        // A state without next function evolves nondeterministically.
        Term fresh = tm_.mk_var(v->name + ".nxt", v->sort, VarRole::Input);
        ts_.input_vars.push_back(fresh);
        ts_.next[v] = fresh;
      }
    }
    ts_.init = tm_.mk_and(init_eqs);
    ts_.property = tm_.mk_not(bad_);
    ts_.validate();
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(lineno_, why);
  }

  void need(const std::vector<std::string>& tok, std::size_t n) const {
    if (tok.size() < n) fail("too few operands for '" + tok[1] + "'");
  }

  long to_id(const std::string& s) const {
    try {
      std::size_t pos = 0;
      long v = std::stol(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      fail("expected a number, got '" + s + "'");
    }
  }

  Sort sort(const std::string& s) const {
    auto it = sorts_.find(to_id(s));
    if (it == sorts_.end()) fail("unknown sort id " + s);
    return it->second;
  }

  Term node(const std::string& s) {
    const long id = to_id(s);
    auto it = nodes_.find(id < 0 ? -id : id);
    if (it == nodes_.end()) fail("unknown node id " + s);
    Term t = it->second;
    if (id > 0) return t;
    return t->sort.is_bool() ? tm_.mk_not(t) : tm_.mk_op(OpKind::Not, t);
  }

  void def(long id, Term t) { nodes_[id] = t; }

  Term checked(OpKind op, Term a, Term b) {
    if (!(a->sort == b->sort)) fail("operand sorts differ");
    return tm_.mk_op(op, a, b);
  }

  Term as_bool(Term t) {
    if (t->sort.is_bool()) return t;
    if (t->sort.width != 1) fail("expected a 1-bit condition");
    if (t->kind == NodeKind::Ite && t->args[1]->is_const() &&
        t->args[2]->is_const() && t->args[1]->value == 1 &&
        t->args[2]->value == 0)
      return t->args[0];
    if (t->is_const()) return tm_.mk_bool(t->value != 0);
    return tm_.mk_eq(t, tm_.mk_const(1, Sort::bv(1)));
  }

  Term as_bv1(Term t) {
    if (!t->sort.is_bool()) return t;
    if (t->is_const()) return tm_.mk_const(t->value, Sort::bv(1));
    return tm_.mk_ite(t, tm_.mk_const(1, Sort::bv(1)),
                      tm_.mk_const(0, Sort::bv(1)));
  }

  Term coerce(Term t, Sort s) {
    if (t->sort == s) return t;
    if (t->sort.is_bool() && s.is_bv() && s.width == 1) return as_bv1(t);
    fail("sort mismatch: expected " + to_string(s) + ", got " +
         to_string(t->sort));
  }

  Term bool_logic(OpKind op, Term a, Term b) {
    switch (op) {
      case OpKind::And: return tm_.mk_and(a, b);
      case OpKind::Or: return tm_.mk_or(a, b);
      case OpKind::Xor: return tm_.mk_not(tm_.mk_eq(a, b));
      case OpKind::Xnor: return tm_.mk_eq(a, b);
      case OpKind::Nand: return tm_.mk_not(tm_.mk_and(a, b));
      case OpKind::Nor: return tm_.mk_not(tm_.mk_or(a, b));
      default: fail("not a logic op");
    }
  }

  TransitionSystem& ts_;
  TermManager& tm_;
  std::size_t lineno_ = 0;
  std::unordered_map<long, Sort> sorts_;
  std::unordered_map<long, Term> nodes_;
  std::map<Term, Term, TermIdLess> inits_;
  Term bad_ = nullptr;
};

}  // namespace

TransitionSystem parse_btor2(std::istream& in) {
  TransitionSystem ts;
  Parser p(ts);
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) p.line(++lineno, raw);
  p.finish();
  return ts;
}

TransitionSystem parse_btor2(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_btor2(is);
}

TransitionSystem parse_btor2_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_btor2(in);
}

// ---------------------------------------------------------------------------

namespace {

class Printer {
 public:
  explicit Printer(const TransitionSystem& ts) : ts_(ts) {}

  std::string run() {
    for (Term v : ts_.state_vars) emit(v);
    for (Term v : ts_.input_vars) emit(v);
    std::vector<std::pair<Term, Term>> inits;
    std::vector<Term> conj;
    if (ts_.init->kind == NodeKind::And)
      conj = ts_.init->args;
    else if (!ts_.init->is_true())
      conj = {ts_.init};
    for (Term c : conj) {
      if (c->kind != NodeKind::Op || c->op != OpKind::Eq || !c->args[0]->is_var() ||
          c->args[0]->role != VarRole::State)
        throw std::logic_error("init is not a conjunction of state = value");
      inits.emplace_back(c->args[0], c->args[1]);
    }
    for (auto& [v, val] : inits) {
      const auto vid = emit(val);
      body_ << ++next_id_ << " init " << sort_id(v->sort) << " " << ids_.at(v)
            << " " << vid << "\n";
    }
    for (auto& [v, val] : ts_.next) {
      const auto vid = emit(val);
      body_ << ++next_id_ << " next " << sort_id(v->sort) << " " << ids_.at(v)
            << " " << vid << "\n";
    }
    // ts.property = not(bad); printing not(property) recovers bad.
    const auto bad = emit(ts_.tm->mk_not(ts_.property));
    body_ << ++next_id_ << " bad " << bad << "\n";
    return header_.str() + body_.str();
  }

 private:
  long sort_id(Sort s) {
    const unsigned w = s.is_bool() ? 1 : s.width;
    if (auto it = sort_ids_.find(w); it != sort_ids_.end()) return it->second;
    // Sorts are numbered in a separate negative-free range below the nodes.
    const long id = ++next_id_;
    header_ << id << " sort bitvec " << w << "\n";
    sort_ids_[w] = id;
    return id;
  }

  long emit(Term t) {
    if (auto it = ids_.find(t); it != ids_.end()) return it->second;
    std::vector<long> a;
    for (Term c : t->args) a.push_back(emit(c));
    const long sid = sort_id(t->sort);
    std::ostringstream line;
    switch (t->kind) {
      case NodeKind::Const:
        if (t->value == 0)
          line << "zero " << sid;
        else if (t->value == 1)
          line << "one " << sid;
        else
          line << "constd " << sid << " " << t->value;
        break;
      case NodeKind::Var:
        line << (t->role == VarRole::Input ? "input " : "state ") << sid << " "
             << t->name;
        break;
      case NodeKind::Op: {
        static const std::unordered_map<OpKind, const char*> names = {
            {OpKind::Add, "add"},     {OpKind::Sub, "sub"},
            {OpKind::Mul, "mul"},     {OpKind::Udiv, "udiv"},
            {OpKind::Urem, "urem"},   {OpKind::Ult, "ult"},
            {OpKind::Ule, "ulte"},    {OpKind::And, "and"},
            {OpKind::Or, "or"},       {OpKind::Xor, "xor"},
            {OpKind::Nand, "nand"},   {OpKind::Nor, "nor"},
            {OpKind::Xnor, "xnor"},   {OpKind::Not, "not"},
            {OpKind::RedAnd, "redand"}, {OpKind::RedOr, "redor"},
            {OpKind::RedXor, "redxor"}, {OpKind::Sll, "sll"},
            {OpKind::Srl, "srl"},     {OpKind::Sra, "sra"},
            {OpKind::Sla, "sll"},     {OpKind::Eq, "eq"}};
        auto it = names.find(t->op);
        if (it == names.end())
          throw std::logic_error("operation has no BTOR2 form: " +
                                 std::string(op_name(t->op)));
        line << it->second << " " << sid;
        for (long x : a) line << " " << x;
        break;
      }
      case NodeKind::Ite:
        line << "ite " << sid << " " << a[0] << " " << a[1] << " " << a[2];
        break;
      case NodeKind::Not:
        line << "not " << sid << " " << a[0];
        break;
      case NodeKind::And:
      case NodeKind::Or: {
        const char* op = t->kind == NodeKind::And ? "and" : "or";
        long acc = a[0];
        for (std::size_t i = 1; i < a.size(); ++i) {
          const long id = ++next_id_;
          body_ << id << " " << op << " " << sid << " " << acc << " " << a[i]
                << "\n";
          acc = id;
        }
        ids_[t] = acc;
        return acc;
      }
    }
    const long id = ++next_id_;
    body_ << id << " " << line.str() << "\n";
    ids_[t] = id;
    return id;
  }

  const TransitionSystem& ts_;
  long next_id_ = 0;
  std::map<unsigned, long> sort_ids_;
  std::unordered_map<Term, long> ids_;
  std::ostringstream header_;
  std::ostringstream body_;
};

}  // namespace

std::string print_btor2(const TransitionSystem& ts) { return Printer(ts).run(); }

// ---------------------------------------------------------------------------

void TransitionSystem::validate() const {
  if (!init || !property) throw std::logic_error("init/property missing");
  if (!init->sort.is_bool() || !property->sort.is_bool())
    throw std::logic_error("init and property must be boolean");
  std::set<Term> known(state_vars.begin(), state_vars.end());
  known.insert(input_vars.begin(), input_vars.end());
  for (Term v : state_vars) {
    auto it = next.find(v);
    if (it == next.end())
      throw std::logic_error("state '" + v->name + "' has no next function");
    if (!(it->second->sort == v->sort))
      throw std::logic_error("next('" + v->name + "') changes sort");
  }
  if (next.size() != state_vars.size())
    throw std::logic_error("next map has entries for non-state variables");
  std::vector<Term> roots{init, property};
  for (auto& [v, f] : next) roots.push_back(f);
  for (Term fv : free_vars(roots))
    if (!known.count(fv))
      throw std::logic_error("free variable '" + fv->name + "' is undeclared");
}

unsigned TransitionSystem::state_bits() const {
  unsigned n = 0;
  for (Term v : state_vars) n += v->sort.width;
  return n;
}

unsigned TransitionSystem::input_bits() const {
  unsigned n = 0;
  for (Term v : input_vars) n += v->sort.width;
  return n;
}

std::string replay_counterexample(const TransitionSystem& ts,
                                  const ConcreteTrace& trace) {
  if (trace.empty()) return "empty trace";
  auto env_of = [&](const ConcreteStep& s) {
    Env env;
    for (Term v : ts.state_vars) {
      auto it = s.state.find(v);
      env[v] = it == s.state.end() ? 0 : it->second;
    }
    for (Term v : ts.input_vars) {
      auto it = s.inputs.find(v);
      env[v] = it == s.inputs.end() ? 0 : it->second;
    }
    return env;
  };
  for (Term v : ts.state_vars)
    if (!trace.front().state.count(v)) return "step 0 lacks state " + v->name;
  if (!eval_concrete(ts.init, env_of(trace.front())))
    return "first state is not initial";
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const Env env = env_of(trace[i]);
    for (Term v : ts.state_vars) {
      const auto want = eval_concrete(ts.next.at(v), env);
      auto it = trace[i + 1].state.find(v);
      if (it == trace[i + 1].state.end() || it->second != want)
        return "step " + std::to_string(i + 1) + " disagrees on " + v->name;
    }
  }
  if (eval_concrete(ts.property, env_of(trace.back())))
    return "last state satisfies the property";
  return {};
}

}  // namespace dpmc
