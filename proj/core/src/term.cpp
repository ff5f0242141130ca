#include "dpmc/term.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "dpmc/errors.hpp"

namespace dpmc {

namespace {

std::uint64_t mask_of(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

Sort Sort::bv(unsigned w) {
  if (w == 0 || w > 64) throw SortMismatch("bit-vector width must be in 1..64");
  return Sort{Kind::BitVec, w};
}

std::uint64_t Sort::max_value() const { return is_bool() ? 1 : mask_of(width); }

std::string to_string(const Sort& s) {
  return s.is_bool() ? "Bool" : "BV" + std::to_string(s.width);
}

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::Add: return "add";
    case OpKind::Sub: return "sub";
    case OpKind::Mul: return "mul";
    case OpKind::Udiv: return "udiv";
    case OpKind::Urem: return "urem";
    case OpKind::Ult: return "ult";
    case OpKind::Ule: return "ule";
    case OpKind::And: return "bvand";
    case OpKind::Or: return "bvor";
    case OpKind::Xor: return "bvxor";
    case OpKind::Nand: return "bvnand";
    case OpKind::Nor: return "bvnor";
    case OpKind::Xnor: return "bvxnor";
    case OpKind::Not: return "bvnot";
    case OpKind::RedAnd: return "redand";
    case OpKind::RedOr: return "redor";
    case OpKind::RedXor: return "redxor";
    case OpKind::RedNand: return "rednand";
    case OpKind::RedNor: return "rednor";
    case OpKind::RedXnor: return "redxnor";
    case OpKind::Sll: return "sll";
    case OpKind::Srl: return "srl";
    case OpKind::Sra: return "sra";
    case OpKind::Sla: return "sla";
    case OpKind::Eq: return "eq";
    case OpKind::Neq: return "neq";
  }
  return "?";
}

bool is_relational(OpKind op) { return op == OpKind::Ult || op == OpKind::Ule; }

bool is_reduction(OpKind op) {
  switch (op) {
    case OpKind::RedAnd:
    case OpKind::RedOr:
    case OpKind::RedXor:
    case OpKind::RedNand:
    case OpKind::RedNor:
    case OpKind::RedXnor:
      return true;
    default:
      return false;
  }
}

bool is_shift(OpKind op) {
  return op == OpKind::Sll || op == OpKind::Srl || op == OpKind::Sra ||
         op == OpKind::Sla;
}

bool is_datapath(OpKind op) { return op != OpKind::Eq && op != OpKind::Neq; }

unsigned op_arity(OpKind op) {
  if (op == OpKind::Not || is_reduction(op)) return 1;
  return 2;
}

std::uint64_t apply_op(OpKind op, unsigned width, std::uint64_t a,
                       std::uint64_t b) {
  const std::uint64_t m = mask_of(width);
  a &= m;
  b &= m;
  switch (op) {
    case OpKind::Add: return (a + b) & m;
    case OpKind::Sub: return (a - b) & m;
    case OpKind::Mul: return (a * b) & m;
    case OpKind::Udiv: return b == 0 ? m : a / b;
    case OpKind::Urem: return b == 0 ? a : a % b;
    case OpKind::Ult: return a < b ? 1 : 0;
    case OpKind::Ule: return a <= b ? 1 : 0;
    case OpKind::And: return a & b;
    case OpKind::Or: return a | b;
    case OpKind::Xor: return a ^ b;
    case OpKind::Nand: return ~(a & b) & m;
    case OpKind::Nor: return ~(a | b) & m;
    case OpKind::Xnor: return ~(a ^ b) & m;
    case OpKind::Not: return ~a & m;
    case OpKind::RedAnd: return a == m ? 1 : 0;
    case OpKind::RedOr: return a != 0 ? 1 : 0;
    case OpKind::RedXor: return std::popcount(a) & 1;
    case OpKind::RedNand: return a == m ? 0 : 1;
    case OpKind::RedNor: return a != 0 ? 0 : 1;
    case OpKind::RedXnor: return (std::popcount(a) & 1) ^ 1;
    case OpKind::Sll:
    case OpKind::Sla:
      return b >= width ? 0 : (a << b) & m;
    case OpKind::Srl: return b >= width ? 0 : a >> b;
    case OpKind::Sra: {
      const bool sign = (a >> (width - 1)) & 1;
      if (b >= width) return sign ? m : 0;
      std::uint64_t r = a >> b;
      if (sign) r |= m & ~(m >> b);
      return r;
    }
    case OpKind::Eq: return a == b ? 1 : 0;
    case OpKind::Neq: return a != b ? 1 : 0;
  }
  return 0;
}

// ---------------------------------------------------------------------------

bool TermManager::NodeEq::operator()(const Node* a, const Node* b) const {
  return a->kind == b->kind && a->op == b->op && a->sort == b->sort &&
         a->value == b->value && a->name == b->name && a->role == b->role &&
         a->args == b->args;
}

Term TermManager::intern(Node n) {
  std::size_t h = static_cast<std::size_t>(n.kind);
  hash_combine(h, static_cast<std::size_t>(n.op));
  hash_combine(h, static_cast<std::size_t>(n.sort.kind));
  hash_combine(h, n.sort.width);
  hash_combine(h, std::hash<std::uint64_t>{}(n.value));
  hash_combine(h, std::hash<std::string>{}(n.name));
  for (Term a : n.args) hash_combine(h, a->id);
  n.hash = h;
  if (auto it = table_.find(&n); it != table_.end()) return *it;
  n.id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(n));
  const Node* p = &nodes_.back();
  table_.insert(p);
  return p;
}

Term TermManager::mk_const(std::uint64_t value, Sort sort) {
  if (value > sort.max_value())
    throw SortMismatch("constant " + std::to_string(value) +
                       " does not fit " + to_string(sort));
  Node n{};
  n.kind = NodeKind::Const;
  n.sort = sort;
  n.value = value;
  return intern(std::move(n));
}

Term TermManager::mk_var(const std::string& name, Sort sort, VarRole role) {
  if (auto it = vars_.find(name); it != vars_.end()) {
    if (!(it->second->sort == sort) || it->second->role != role)
      throw SortMismatch("variable '" + name + "' redeclared");
    return it->second;
  }
  Node n{};
  n.kind = NodeKind::Var;
  n.sort = sort;
  n.name = name;
  n.role = role;
  Term t = intern(std::move(n));
  vars_.emplace(name, t);
  return t;
}

Term TermManager::find_var(const std::string& name) const {
  auto it = vars_.find(name);
  return it == vars_.end() ? nullptr : it->second;
}

Term TermManager::mk_op(OpKind op, std::vector<Term> args) {
  if (args.size() != op_arity(op))
    throw SortMismatch(std::string(op_name(op)) + ": wrong arity");
  if (op == OpKind::Neq) return mk_not(mk_op(OpKind::Eq, args[0], args[1]));
  const Sort s = args[0]->sort;
  if (args.size() == 2 && !(args[1]->sort == s))
    throw SortMismatch(std::string(op_name(op)) + ": operand sorts differ (" +
                       to_string(s) + ", " + to_string(args[1]->sort) + ")");
  if (op != OpKind::Eq && !s.is_bv())
    throw SortMismatch(std::string(op_name(op)) + ": expects bit-vectors");
  Node n{};
  n.kind = NodeKind::Op;
  n.op = op;
  if (op == OpKind::Eq || is_relational(op))
    n.sort = Sort::boolean();
  else if (is_reduction(op))
    n.sort = Sort::bv(1);
  else
    n.sort = s;
  n.args = std::move(args);
  return intern(std::move(n));
}

Term TermManager::mk_ite(Term c, Term t, Term e) {
  if (!c->sort.is_bool()) throw SortMismatch("ite condition must be boolean");
  if (!(t->sort == e->sort)) throw SortMismatch("ite branches differ in sort");
  if (c->is_true() || t == e) return t;
  if (c->is_false()) return e;
  Node n{};
  n.kind = NodeKind::Ite;
  n.sort = t->sort;
  n.args = {c, t, e};
  return intern(std::move(n));
}

Term TermManager::mk_not(Term a) {
  if (!a->sort.is_bool()) throw SortMismatch("not expects a boolean");
  if (a->is_const()) return mk_bool(a->value == 0);
  if (a->kind == NodeKind::Not) return a->args[0];
  Node n{};
  n.kind = NodeKind::Not;
  n.sort = Sort::boolean();
  n.args = {a};
  return intern(std::move(n));
}

Term TermManager::mk_and(std::vector<Term> args) {
  std::vector<Term> kept;
  for (Term a : args) {
    if (!a->sort.is_bool()) throw SortMismatch("and expects booleans");
    if (a->is_false()) return mk_false();
    if (a->is_true()) continue;
    if (a->kind == NodeKind::And) {
      for (Term c : a->args)
        if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
      continue;
    }
    if (std::find(kept.begin(), kept.end(), a) == kept.end()) kept.push_back(a);
  }
  if (kept.empty()) return mk_true();
  if (kept.size() == 1) return kept[0];
  Node n{};
  n.kind = NodeKind::And;
  n.sort = Sort::boolean();
  n.args = std::move(kept);
  return intern(std::move(n));
}

Term TermManager::mk_or(std::vector<Term> args) {
  std::vector<Term> kept;
  for (Term a : args) {
    if (!a->sort.is_bool()) throw SortMismatch("or expects booleans");
    if (a->is_true()) return mk_true();
    if (a->is_false()) continue;
    if (a->kind == NodeKind::Or) {
      for (Term c : a->args)
        if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
      continue;
    }
    if (std::find(kept.begin(), kept.end(), a) == kept.end()) kept.push_back(a);
  }
  if (kept.empty()) return mk_false();
  if (kept.size() == 1) return kept[0];
  Node n{};
  n.kind = NodeKind::Or;
  n.sort = Sort::boolean();
  n.args = std::move(kept);
  return intern(std::move(n));
}

// ---------------------------------------------------------------------------

namespace {

Term rebuild(TermManager& tm, Term t, std::vector<Term> args) {
  switch (t->kind) {
    case NodeKind::Const:
    case NodeKind::Var:
      return t;
    case NodeKind::Op: return tm.mk_op(t->op, std::move(args));
    case NodeKind::Ite: return tm.mk_ite(args[0], args[1], args[2]);
    case NodeKind::Not: return tm.mk_not(args[0]);
    case NodeKind::And: return tm.mk_and(std::move(args));
    case NodeKind::Or: return tm.mk_or(std::move(args));
  }
  return t;
}

}  // namespace

Term substitute(TermManager& tm, Term t, const Substitution& bindings) {
  for (const auto& [k, v] : bindings)
    if (!(k->sort == v->sort))
      throw SortMismatch("substitution " + to_string(k) + " -> " +
                         to_string(v) + " changes sort");
  if (bindings.empty()) return t;
  std::unordered_map<Term, Term> memo;
  const Term roots[] = {t};
  for (Term n : topo_order(roots)) {
    if (auto b = bindings.find(n); b != bindings.end()) {
      memo[n] = b->second;
      continue;
    }
    std::vector<Term> args;
    args.reserve(n->args.size());
    bool changed = false;
    for (Term a : n->args) {
      args.push_back(memo.at(a));
      changed |= args.back() != a;
    }
    memo[n] = changed ? rebuild(tm, n, std::move(args)) : n;
  }
  return memo.at(t);
}

std::vector<Term> topo_order(std::span<const Term> roots) {
  std::vector<Term> order;
  std::unordered_set<Term> seen;
  std::vector<std::pair<Term, std::size_t>> stack;
  for (Term r : roots) {
    if (seen.count(r)) continue;
    stack.emplace_back(r, 0);
    seen.insert(r);
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      if (i < n->args.size()) {
        Term c = n->args[i++];
        if (seen.insert(c).second) stack.emplace_back(c, 0);
      } else {
        order.push_back(n);
        stack.pop_back();
      }
    }
  }
  return order;
}

std::vector<Term> free_vars(std::span<const Term> ts) {
  std::vector<Term> vars;
  for (Term n : topo_order(ts))
    if (n->is_var()) vars.push_back(n);
  std::sort(vars.begin(), vars.end(), TermIdLess{});
  return vars;
}

std::vector<Term> free_vars(Term t) {
  const Term roots[] = {t};
  return free_vars(roots);
}

namespace {

std::uint64_t eval_node(Term n, std::span<const std::uint64_t> a) {
  switch (n->kind) {
    case NodeKind::Const: return n->value;
    case NodeKind::Var: return 0;
    case NodeKind::Op:
      return apply_op(n->op, n->args[0]->sort.width, a[0],
                      a.size() > 1 ? a[1] : 0);
    case NodeKind::Ite: return a[0] ? a[1] : a[2];
    case NodeKind::Not: return a[0] ? 0 : 1;
    case NodeKind::And:
      for (auto v : a)
        if (!v) return 0;
      return 1;
    case NodeKind::Or:
      for (auto v : a)
        if (v) return 1;
      return 0;
  }
  return 0;
}

}  // namespace

std::uint64_t eval_concrete(Term t, const Env& env) {
  std::unordered_map<Term, std::uint64_t> val;
  const Term roots[] = {t};
  std::vector<std::uint64_t> a;
  for (Term n : topo_order(roots)) {
    if (n->is_var()) {
      auto it = env.find(n);
      if (it == env.end())
        throw std::invalid_argument("no value for variable " + n->name);
      val[n] = it->second & n->sort.max_value();
      continue;
    }
    a.clear();
    for (Term c : n->args) a.push_back(val.at(c));
    val[n] = eval_node(n, a);
  }
  return val.at(t);
}

std::string to_string(Term t) {
  std::ostringstream os;
  switch (t->kind) {
    case NodeKind::Const:
      if (t->sort.is_bool())
        os << (t->value ? "true" : "false");
      else
        os << t->value << ":" << t->sort.width;
      return os.str();
    case NodeKind::Var: return t->name;
    case NodeKind::Op: os << op_name(t->op); break;
    case NodeKind::Ite: os << "ite"; break;
    case NodeKind::Not: os << "not"; break;
    case NodeKind::And: os << "and"; break;
    case NodeKind::Or: os << "or"; break;
  }
  os << "(";
  for (std::size_t i = 0; i < t->args.size(); ++i)
    os << (i ? ", " : "") << to_string(t->args[i]);
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(std::span<const Term> roots) {
  order_ = topo_order(roots);
  std::unordered_map<Term, std::uint32_t> slot;
  for (std::uint32_t i = 0; i < order_.size(); ++i) slot[order_[i]] = i;
  var_slot_.assign(order_.size(), -1);
  arg_slots_.resize(order_.size());
  for (std::uint32_t i = 0; i < order_.size(); ++i) {
    Term n = order_[i];
    if (n->is_var()) {
      var_slot_[i] = static_cast<int>(vars_.size());
      vars_.push_back(n);
    }
    for (Term a : n->args) arg_slots_[i].push_back(slot.at(a));
  }
  for (Term r : roots) root_slots_.push_back(slot.at(r));
  inputs_.assign(vars_.size(), 0);
  scratch_.assign(order_.size(), 0);
}

int Evaluator::var_index(Term var) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

void Evaluator::run() {
  std::uint64_t buf[3];
  for (std::size_t i = 0; i < order_.size(); ++i) {
    Term n = order_[i];
    if (var_slot_[i] >= 0) {
      scratch_[i] = inputs_[var_slot_[i]] & n->sort.max_value();
      continue;
    }
    const auto& slots = arg_slots_[i];
    if (slots.size() <= 3) {
      for (std::size_t k = 0; k < slots.size(); ++k) buf[k] = scratch_[slots[k]];
      scratch_[i] = eval_node(n, std::span<const std::uint64_t>(buf, slots.size()));
    } else {
      std::vector<std::uint64_t> many;
      for (auto s : slots) many.push_back(scratch_[s]);
      scratch_[i] = eval_node(n, many);
    }
  }
}

std::uint64_t Evaluator::value(std::size_t root_idx) const {
  return scratch_[root_slots_[root_idx]];
}

}  // namespace dpmc
