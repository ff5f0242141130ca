#include "dpmc/abstract.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "dpmc/errors.hpp"

namespace dpmc {

namespace {

void hash_combine(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

std::string_view table_name(OpKind op) {
  switch (op) {
    case OpKind::Add: return "ADD";
    case OpKind::Sub: return "SUB";
    case OpKind::Mul: return "MUL";
    case OpKind::Udiv: return "DIV";
    case OpKind::Urem: return "MOD";
    case OpKind::Ult: return "LT";
    case OpKind::Ule: return "LE";
    case OpKind::And: return "BitWiseAnd";
    case OpKind::Or: return "BitWiseOr";
    case OpKind::Xor: return "BitWiseXor";
    case OpKind::Nand: return "BitWiseNAnd";
    case OpKind::Nor: return "BitWiseNor";
    case OpKind::Xnor: return "BitWiseXNor";
    case OpKind::Not: return "BitWiseNot";
    case OpKind::RedAnd: return "ReductionAnd";
    case OpKind::RedOr: return "ReductionOr";
    case OpKind::RedXor: return "ReductionXor";
    case OpKind::RedNand: return "ReductionNAnd";
    case OpKind::RedNor: return "ReductionNor";
    case OpKind::RedXnor: return "ReductionXNor";
    case OpKind::Sll: return "ShiftL";
    case OpKind::Srl: return "ShiftR";
    case OpKind::Sla: return "AShiftL";
    case OpKind::Sra: return "AShiftR";
    case OpKind::Eq:
    case OpKind::Neq: break;
  }
  throw std::logic_error("operation is not abstracted: " + std::string(op_name(op)));
}

int kind_rank(Symbol::Kind k) {
  switch (k) {
    case Symbol::Kind::UConst: return 0;
    case Symbol::Kind::UVar: return 1;
    default: return 2;
  }
}

}  // namespace

bool SymLess::operator()(Sym a, Sym b) const {
  const int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
  if (ra != rb) return ra < rb;
  if (ra == 0) {
    if (a->sort.width != b->sort.width) return a->sort.width < b->sort.width;
    return a->value < b->value;
  }
  return a->name < b->name;
}

// ---------------------------------------------------------------------------

AbstractContext::AbstractContext() {
  ANode t{};
  t.kind = AKind::True;
  true_ = intern(t);
  ANode f{};
  f.kind = AKind::False;
  false_ = intern(f);
}

Sym AbstractContext::add_symbol(Symbol s) {
  const std::string key = std::to_string(kind_rank(s.kind)) + ":" + s.name;
  if (auto it = by_name_.find(key); it != by_name_.end()) {
    if (!(it->second->sort == s.sort))
      throw SortMismatch("symbol '" + s.name + "' redeclared with another sort");
    return it->second;
  }
  s.id = static_cast<std::uint32_t>(syms_.size());
  syms_.push_back(std::move(s));
  Sym p = &syms_.back();
  by_name_.emplace(key, p);
  return p;
}

Sym AbstractContext::uconst(std::uint64_t value, unsigned width) {
  Symbol s{};
  s.kind = Symbol::Kind::UConst;
  s.value = value & Sort::bv(width).max_value();
  s.base = std::to_string(s.value);
  s.name = "k" + s.base + "_" + std::to_string(width);
  s.sort = Sort::bv(width);
  return add_symbol(std::move(s));
}

Sym AbstractContext::uvar(const std::string& name, Sort sort) {
  Symbol s{};
  s.kind = Symbol::Kind::UVar;
  s.name = name;
  s.base = name;
  s.sort = sort;
  return add_symbol(std::move(s));
}

Sym AbstractContext::ufun(OpKind op, unsigned arg_width) {
  Symbol s{};
  s.kind = is_relational(op) ? Symbol::Kind::UPred : Symbol::Kind::UFun;
  s.op = op;
  s.arg_width = arg_width;
  s.base = std::string(table_name(op));
  s.name = s.base + "_" + std::to_string(arg_width);
  if (is_relational(op))
    s.sort = Sort::boolean();
  else if (is_reduction(op))
    s.sort = Sort::bv(1);
  else
    s.sort = Sort::bv(arg_width);
  return add_symbol(std::move(s));
}

Sym AbstractContext::find_symbol(const std::string& name) const {
  for (int r : {1, 2, 0})
    if (auto it = by_name_.find(std::to_string(r) + ":" + name); it != by_name_.end())
      return it->second;
  return nullptr;
}

std::vector<Sym> AbstractContext::symbols() const {
  std::vector<Sym> out;
  for (const auto& s : syms_) out.push_back(&s);
  std::sort(out.begin(), out.end(), SymLess{});
  return out;
}

bool AbstractContext::Eq::operator()(const ANode* a, const ANode* b) const {
  return a->kind == b->kind && a->sym == b->sym && a->args == b->args &&
         a->sort == b->sort;
}

ATerm AbstractContext::intern(ANode n) {
  std::size_t h = static_cast<std::size_t>(n.kind);
  hash_combine(h, n.sym ? n.sym->id + 1 : 0);
  hash_combine(h, n.sort.width + (n.sort.is_bool() ? 1000 : 0));
  for (ATerm a : n.args) hash_combine(h, a->id);
  n.hash = h;
  if (auto it = table_.find(&n); it != table_.end()) return *it;
  n.id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(n));
  const ANode* p = &nodes_.back();
  table_.insert(p);
  return p;
}

ATerm AbstractContext::mk_sym(Sym s) {
  ANode n{};
  n.kind = AKind::Sym;
  n.sym = s;
  n.sort = s->sort;
  return intern(std::move(n));
}

ATerm AbstractContext::mk_app(Sym f, std::vector<ATerm> args) {
  if (!f->is_fun()) throw SortMismatch("application of a 0-ary symbol");
  if (args.size() != op_arity(f->op))
    throw SortMismatch(f->name + ": wrong arity");
  for (ATerm a : args)
    if (!(a->sort == Sort::bv(f->arg_width)))
      throw SortMismatch(f->name + ": argument sort mismatch");
  ANode n{};
  n.kind = AKind::App;
  n.sym = f;
  n.sort = f->sort;
  n.args = std::move(args);
  return intern(std::move(n));
}

ATerm AbstractContext::mk_ite(ATerm c, ATerm t, ATerm e) {
  if (!c->is_bool()) throw SortMismatch("ite condition must be boolean");
  if (!(t->sort == e->sort)) throw SortMismatch("ite branches differ in sort");
  if (c == true_ || t == e) return t;
  if (c == false_) return e;
  if (t->is_bool()) return mk_or(mk_and(c, t), mk_and(mk_not(c), e));
  ANode n{};
  n.kind = AKind::Ite;
  n.sort = t->sort;
  n.args = {c, t, e};
  return intern(std::move(n));
}

ATerm AbstractContext::mk_eq(ATerm a, ATerm b) {
  if (!(a->sort == b->sort)) throw SortMismatch("equality over different sorts");
  if (a == b) return true_;
  if (a->is_bool()) return mk_or(mk_and(a, b), mk_and(mk_not(a), mk_not(b)));
  if (a->is_const() && b->is_const()) return false_;
  if (b->id < a->id) std::swap(a, b);
  ANode n{};
  n.kind = AKind::Eq;
  n.sort = Sort::boolean();
  n.args = {a, b};
  return intern(std::move(n));
}

ATerm AbstractContext::mk_not(ATerm a) {
  if (!a->is_bool()) throw SortMismatch("not expects a boolean");
  if (a == true_) return false_;
  if (a == false_) return true_;
  if (a->kind == AKind::Not) return a->args[0];
  ANode n{};
  n.kind = AKind::Not;
  n.sort = Sort::boolean();
  n.args = {a};
  return intern(std::move(n));
}

ATerm AbstractContext::mk_and(std::vector<ATerm> args) {
  std::vector<ATerm> flat;
  for (ATerm a : args) {
    if (!a->is_bool()) throw SortMismatch("and expects booleans");
    if (a == false_) return false_;
    if (a == true_) continue;
    if (a->kind == AKind::And)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(a);
  }
  std::sort(flat.begin(), flat.end(), ATermIdLess{});
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  for (ATerm a : flat)
    if (a->kind == AKind::Not &&
        std::binary_search(flat.begin(), flat.end(), a->args[0], ATermIdLess{}))
      return false_;
  if (flat.empty()) return true_;
  if (flat.size() == 1) return flat[0];
  ANode n{};
  n.kind = AKind::And;
  n.sort = Sort::boolean();
  n.args = std::move(flat);
  return intern(std::move(n));
}

ATerm AbstractContext::mk_or(std::vector<ATerm> args) {
  std::vector<ATerm> flat;
  for (ATerm a : args) {
    if (!a->is_bool()) throw SortMismatch("or expects booleans");
    if (a == true_) return true_;
    if (a == false_) continue;
    if (a->kind == AKind::Or)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(a);
  }
  std::sort(flat.begin(), flat.end(), ATermIdLess{});
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  for (ATerm a : flat)
    if (a->kind == AKind::Not &&
        std::binary_search(flat.begin(), flat.end(), a->args[0], ATermIdLess{}))
      return true_;
  if (flat.empty()) return false_;
  if (flat.size() == 1) return flat[0];
  ANode n{};
  n.kind = AKind::Or;
  n.sort = Sort::boolean();
  n.args = std::move(flat);
  return intern(std::move(n));
}

ATerm AbstractContext::substitute(ATerm root,
                                  const std::unordered_map<ATerm, ATerm>& m) {
  std::unordered_map<ATerm, ATerm> memo;
  std::function<ATerm(ATerm)> go = [&](ATerm t) -> ATerm {
    if (auto it = m.find(t); it != m.end()) return it->second;
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    ATerm r = t;
    if (!t->args.empty()) {
      std::vector<ATerm> args;
      bool changed = false;
      for (ATerm a : t->args) {
        args.push_back(go(a));
        changed |= args.back() != a;
      }
      if (changed) {
        switch (t->kind) {
          case AKind::App: r = mk_app(t->sym, std::move(args)); break;
          case AKind::Ite: r = mk_ite(args[0], args[1], args[2]); break;
          case AKind::Eq: r = mk_eq(args[0], args[1]); break;
          case AKind::Not: r = mk_not(args[0]); break;
          case AKind::And: r = mk_and(std::move(args)); break;
          case AKind::Or: r = mk_or(std::move(args)); break;
          default: break;
        }
      }
    }
    memo.emplace(t, r);
    return r;
  };
  return go(root);
}

ATerm AbstractContext::rename(ATerm t, const std::unordered_map<Sym, Sym>& m) {
  std::unordered_map<ATerm, ATerm> leaves;
  for (ATerm n : atopo_order({t}))
    if (n->kind == AKind::Sym)
      if (auto it = m.find(n->sym); it != m.end()) leaves.emplace(n, mk_sym(it->second));
  if (leaves.empty()) return t;
  return substitute(t, leaves);
}

Sym AbstractContext::primed(Sym v) {
  if (!v->is_var()) throw std::logic_error("primed: not a variable");
  return uvar(v->name + "'", v->sort);
}

bool AbstractContext::is_primed(Sym v) const {
  return v->is_var() && !v->name.empty() && v->name.back() == '\'';
}

Sym AbstractContext::unprimed(Sym v) const {
  if (!is_primed(v)) return v;
  Sym u = find_symbol(v->name.substr(0, v->name.size() - 1));
  if (!u || !u->is_var()) throw UnmappedSymbol("no current-frame copy of " + v->name);
  return u;
}

Sym AbstractContext::timed(Sym v, unsigned step) {
  if (!v->is_var()) throw std::logic_error("timed: not a variable");
  return uvar(v->name + "@" + std::to_string(step), v->sort);
}

// ---------------------------------------------------------------------------

ATerm lit_term(AbstractContext& ctx, const ALit& l) {
  return l.neg ? ctx.mk_not(l.atom) : l.atom;
}

ATerm AbstractFormula::to_term(AbstractContext& ctx) const {
  std::vector<ATerm> cs;
  for (const auto& c : clauses) {
    std::vector<ATerm> ls;
    for (const auto& l : c) ls.push_back(lit_term(ctx, l));
    cs.push_back(ctx.mk_or(std::move(ls)));
  }
  return ctx.mk_and(std::move(cs));
}

std::vector<ATerm> atopo_order(const std::vector<ATerm>& roots) {
  std::vector<ATerm> out;
  std::unordered_set<ATerm> seen;
  std::vector<std::pair<ATerm, std::size_t>> stack;
  for (ATerm r : roots) {
    if (!seen.insert(r).second) continue;
    stack.emplace_back(r, 0);
    while (!stack.empty()) {
      auto& [t, i] = stack.back();
      if (i < t->args.size()) {
        ATerm c = t->args[i++];
        if (seen.insert(c).second) stack.emplace_back(c, 0);
      } else {
        out.push_back(t);
        stack.pop_back();
      }
    }
  }
  return out;
}

void collect_symbols(ATerm t, SymSet& out) {
  for (ATerm n : atopo_order({t}))
    if (n->sym) out.insert(n->sym);
}

SymSet symb(ATerm t) {
  SymSet s;
  collect_symbols(t, s);
  return s;
}

SymSet symb(const AbstractFormula& f) {
  SymSet s;
  for (const auto& c : f.clauses)
    for (const auto& l : c) collect_symbols(l.atom, s);
  return s;
}

std::string to_string(ATerm t) {
  switch (t->kind) {
    case AKind::True: return "true";
    case AKind::False: return "false";
    case AKind::Sym: return t->sym->base;
    case AKind::App: {
      std::string s = t->sym->base + "(";
      for (std::size_t i = 0; i < t->args.size(); ++i)
        s += (i ? "," : "") + to_string(t->args[i]);
      return s + ")";
    }
    case AKind::Ite:
      return "ite(" + to_string(t->args[0]) + "," + to_string(t->args[1]) + "," +
             to_string(t->args[2]) + ")";
    case AKind::Eq: return to_string(t->args[0]) + "=" + to_string(t->args[1]);
    case AKind::Not:
      if (t->args[0]->kind == AKind::Eq)
        return to_string(t->args[0]->args[0]) + "!=" + to_string(t->args[0]->args[1]);
      return "!" + to_string(t->args[0]);
    case AKind::And:
    case AKind::Or: {
      const char* op = t->kind == AKind::And ? " & " : " | ";
      std::string s = "(";
      for (std::size_t i = 0; i < t->args.size(); ++i)
        s += (i ? op : "") + to_string(t->args[i]);
      return s + ")";
    }
  }
  return "?";
}

std::string to_string(const ALit& l) {
  if (!l.neg) return to_string(l.atom);
  if (l.atom->kind == AKind::Eq)
    return to_string(l.atom->args[0]) + "!=" + to_string(l.atom->args[1]);
  return "!" + to_string(l.atom);
}

std::string to_string(const AClause& c) {
  if (c.empty()) return "false";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " | " : "") + to_string(c[i]);
  return s;
}

namespace {

std::string smt_sort(Sort s) {
  return s.is_bool() ? "Bool" : "W" + std::to_string(s.width);
}

std::string smt_name(const std::string& n) { return "|" + n + "|"; }

std::string smt_term(ATerm t) {
  switch (t->kind) {
    case AKind::True: return "true";
    case AKind::False: return "false";
    case AKind::Sym: return smt_name(t->sym->name);
    case AKind::App: {
      std::string s = "(" + smt_name(t->sym->name);
      for (ATerm a : t->args) s += " " + smt_term(a);
      return s + ")";
    }
    case AKind::Ite:
      return "(ite " + smt_term(t->args[0]) + " " + smt_term(t->args[1]) + " " +
             smt_term(t->args[2]) + ")";
    case AKind::Eq:
      return "(= " + smt_term(t->args[0]) + " " + smt_term(t->args[1]) + ")";
    case AKind::Not: return "(not " + smt_term(t->args[0]) + ")";
    case AKind::And:
    case AKind::Or: {
      std::string s = t->kind == AKind::And ? "(and" : "(or";
      for (ATerm a : t->args) s += " " + smt_term(a);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

std::string to_smt_term(ATerm t) { return smt_term(t); }

std::string to_smtlib(const AbstractFormula& f) {
  const SymSet syms = symb(f);
  std::set<unsigned> widths;
  for (Sym s : syms) {
    if (s->sort.is_bv()) widths.insert(s->sort.width);
    if (s->is_fun()) widths.insert(s->arg_width);
  }
  std::ostringstream out;
  out << "(set-logic QF_UF)\n";
  for (unsigned w : widths) out << "(declare-sort W" << w << " 0)\n";
  std::map<unsigned, std::vector<Sym>> consts;
  for (Sym s : syms) {
    out << "(declare-fun " << smt_name(s->name) << " (";
    if (s->is_fun())
      for (unsigned i = 0; i < op_arity(s->op); ++i)
        out << (i ? " " : "") << "W" << s->arg_width;
    out << ") " << smt_sort(s->sort) << ")\n";
    if (s->is_const()) consts[s->sort.width].push_back(s);
  }
  for (const auto& [w, cs] : consts) {
    if (cs.size() < 2) continue;
    out << "(assert (distinct";
    for (Sym c : cs) out << " " << smt_name(c->name);
    out << "))\n";
  }
  for (const auto& c : f.clauses) {
    out << "(assert (or";
    for (const auto& l : c)
      out << " " << (l.neg ? "(not " + smt_term(l.atom) + ")" : smt_term(l.atom));
    out << "))\n";
  }
  out << "(check-sat)\n";
  return out.str();
}

}  // namespace dpmc
