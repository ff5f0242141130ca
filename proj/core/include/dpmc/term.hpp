#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dpmc {

/// Sort of a word-level term: a fixed-width bit-vector or a boolean.
struct Sort {
  enum class Kind : std::uint8_t { Bool, BitVec };

  Kind kind = Kind::Bool;
  unsigned width = 1;

  static Sort boolean() { return Sort{Kind::Bool, 1}; }
  static Sort bv(unsigned w);

  bool is_bool() const { return kind == Kind::Bool; }
  bool is_bv() const { return kind == Kind::BitVec; }
  /// All-ones value of the sort (1 for bool).
  std::uint64_t max_value() const;

  friend bool operator==(const Sort&, const Sort&) = default;
};

std::string to_string(const Sort& s);

/// Closed set of datapath operations handled by the checker.
enum class OpKind : std::uint8_t {
  Add, Sub, Mul, Udiv, Urem,
  Ult, Ule,
  And, Or, Xor, Nand, Nor, Xnor, Not,
  RedAnd, RedOr, RedXor, RedNand, RedNor, RedXnor,
  Sll, Srl, Sra, Sla,
  Eq, Neq,
};

inline constexpr OpKind kAllOpKinds[] = {
    OpKind::Add,    OpKind::Sub,    OpKind::Mul,     OpKind::Udiv,
    OpKind::Urem,   OpKind::Ult,    OpKind::Ule,     OpKind::And,
    OpKind::Or,     OpKind::Xor,    OpKind::Nand,    OpKind::Nor,
    OpKind::Xnor,   OpKind::Not,    OpKind::RedAnd,  OpKind::RedOr,
    OpKind::RedXor, OpKind::RedNand, OpKind::RedNor, OpKind::RedXnor,
    OpKind::Sll,    OpKind::Srl,    OpKind::Sra,     OpKind::Sla,
    OpKind::Eq,     OpKind::Neq};

std::string_view op_name(OpKind op);
unsigned op_arity(OpKind op);
bool is_relational(OpKind op);  // ult, ule
bool is_reduction(OpKind op);
bool is_shift(OpKind op);
/// Operations that are replaced by uninterpreted symbols during abstraction.
bool is_datapath(OpKind op);

/// Concrete semantics of a datapath operation at the given operand width.
/// Relations return 0/1; reductions return a 1-bit value.
std::uint64_t apply_op(OpKind op, unsigned width, std::uint64_t a,
                       std::uint64_t b = 0);

enum class NodeKind : std::uint8_t { Const, Var, Op, Ite, Not, And, Or };
enum class VarRole : std::uint8_t { State, Input, Next };

struct Node {
  NodeKind kind;
  OpKind op = OpKind::Add;  // meaningful for NodeKind::Op only
  Sort sort;
  std::uint64_t value = 0;  // Const
  std::string name;         // Var
  VarRole role = VarRole::State;
  std::vector<const Node*> args;
  std::uint32_t id = 0;  // creation order, used for deterministic ordering
  std::size_t hash = 0;

  bool is_const() const { return kind == NodeKind::Const; }
  bool is_var() const { return kind == NodeKind::Var; }
  bool is_true() const { return is_const() && sort.is_bool() && value == 1; }
  bool is_false() const { return is_const() && sort.is_bool() && value == 0; }
};

/// Hash-consed term handle: structurally equal terms share one Node.
using Term = const Node*;

struct TermIdLess {
  bool operator()(Term a, Term b) const { return a->id < b->id; }
};

class TermManager {
 public:
  TermManager() = default;
  TermManager(const TermManager&) = delete;
  TermManager& operator=(const TermManager&) = delete;

  Term mk_const(std::uint64_t value, Sort sort);
  Term mk_bool(bool b) { return mk_const(b ? 1 : 0, Sort::boolean()); }
  Term mk_true() { return mk_bool(true); }
  Term mk_false() { return mk_bool(false); }
  /// Variables are identified by name; re-declaring with another sort throws.
  Term mk_var(const std::string& name, Sort sort, VarRole role);
  /// Looks up a variable by name, nullptr when unknown.
  Term find_var(const std::string& name) const;

  Term mk_op(OpKind op, std::vector<Term> args);
  Term mk_op(OpKind op, Term a) { return mk_op(op, std::vector<Term>{a}); }
  Term mk_op(OpKind op, Term a, Term b) {
    return mk_op(op, std::vector<Term>{a, b});
  }
  Term mk_eq(Term a, Term b) { return mk_op(OpKind::Eq, a, b); }
  Term mk_ite(Term c, Term t, Term e);
  Term mk_not(Term a);
  Term mk_and(std::vector<Term> args);
  Term mk_or(std::vector<Term> args);
  Term mk_and(Term a, Term b) { return mk_and(std::vector<Term>{a, b}); }
  Term mk_or(Term a, Term b) { return mk_or(std::vector<Term>{a, b}); }
  Term mk_implies(Term a, Term b) { return mk_or(mk_not(a), b); }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct NodeHash {
    std::size_t operator()(const Node* n) const { return n->hash; }
  };
  struct NodeEq {
    bool operator()(const Node* a, const Node* b) const;
  };

  Term intern(Node n);

  std::deque<Node> nodes_;
  std::unordered_set<const Node*, NodeHash, NodeEq> table_;
  std::unordered_map<std::string, Term> vars_;
};

using Substitution = std::unordered_map<Term, Term>;

/// Simultaneous structural substitution. Keys and images must share a sort.
Term substitute(TermManager& tm, Term t, const Substitution& bindings);

using Env = std::unordered_map<Term, std::uint64_t>;

/// Evaluates under fixed-width unsigned semantics; booleans are 0/1.
std::uint64_t eval_concrete(Term t, const Env& env);

/// Free variables in creation order.
std::vector<Term> free_vars(Term t);
std::vector<Term> free_vars(std::span<const Term> ts);

/// Post-order (children first) listing of the DAG rooted at the given terms.
std::vector<Term> topo_order(std::span<const Term> roots);

std::string to_string(Term t);

/// Compiled straight-line evaluator for repeated evaluation of a fixed set
/// of roots over changing variable values.
class Evaluator {
 public:
  explicit Evaluator(std::span<const Term> roots);

  /// Index of a variable among the evaluator's inputs, -1 when absent.
  int var_index(Term var) const;
  const std::vector<Term>& vars() const { return vars_; }
  void set(std::size_t var_idx, std::uint64_t value) { inputs_[var_idx] = value; }
  void run();
  std::uint64_t value(std::size_t root_idx) const;

 private:
  std::vector<Term> order_;
  std::vector<Term> vars_;
  std::vector<std::uint64_t> inputs_;
  std::vector<std::uint64_t> scratch_;
  std::vector<std::vector<std::uint32_t>> arg_slots_;
  std::vector<int> var_slot_;
  std::vector<std::uint32_t> root_slots_;
};

}  // namespace dpmc
