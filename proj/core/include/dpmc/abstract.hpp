#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dpmc/term.hpp"

namespace dpmc {

/// Uninterpreted symbol of the abstract (EUF) level.
struct Symbol {
  enum class Kind : std::uint8_t { UConst, UVar, UFun, UPred };

  Kind kind;
  std::string name;        // unique, e.g. "ADD_2", "x", "x'", "k3_2"
  std::string base;        // display name, e.g. "ADD", "x", "3"
  OpKind op = OpKind::Add; // UFun / UPred
  unsigned arg_width = 0;  // UFun / UPred operand width
  Sort sort;               // result sort (UConst / UVar: the value sort)
  std::uint64_t value = 0; // UConst
  std::uint32_t id = 0;

  bool is_const() const { return kind == Kind::UConst; }
  bool is_var() const { return kind == Kind::UVar; }
  bool is_fun() const { return kind == Kind::UFun || kind == Kind::UPred; }
};

using Sym = const Symbol*;

/// Deterministic symbol order: constants by (width, value), variables by
/// name, then functions and predicates by name.
struct SymLess {
  bool operator()(Sym a, Sym b) const;
};

using SymSet = std::set<Sym, SymLess>;

enum class AKind : std::uint8_t { True, False, Sym, App, Ite, Eq, Not, And, Or };

struct ANode {
  AKind kind;
  Sym sym = nullptr;  // Sym: the symbol; App: the function symbol
  std::vector<const ANode*> args;
  Sort sort;
  std::uint32_t id = 0;
  std::size_t hash = 0;

  bool is_bool() const { return sort.is_bool(); }
  bool is_const() const { return kind == AKind::Sym && sym->is_const(); }
  bool is_app() const { return kind == AKind::App; }
  /// Atoms are the boolean leaves of the propositional skeleton.
  bool is_atom() const {
    return kind == AKind::Eq || kind == AKind::Sym || kind == AKind::App;
  }
};

/// Hash-consed abstract term handle.
using ATerm = const ANode*;

struct ATermIdLess {
  bool operator()(ATerm a, ATerm b) const { return a->id < b->id; }
};

/// Owns abstract symbols and hash-consed abstract terms.
class AbstractContext {
 public:
  AbstractContext();
  AbstractContext(const AbstractContext&) = delete;
  AbstractContext& operator=(const AbstractContext&) = delete;

  Sym uconst(std::uint64_t value, unsigned width);
  /// Variables are keyed by name; the sort must agree on redeclaration.
  Sym uvar(const std::string& name, Sort sort);
  Sym ufun(OpKind op, unsigned arg_width);
  Sym find_symbol(const std::string& name) const;
  std::vector<Sym> symbols() const;

  ATerm mk_true() const { return true_; }
  ATerm mk_false() const { return false_; }
  ATerm mk_bool(bool b) const { return b ? true_ : false_; }
  ATerm mk_sym(Sym s);
  ATerm mk_const(std::uint64_t value, unsigned width) {
    return mk_sym(uconst(value, width));
  }
  ATerm mk_app(Sym f, std::vector<ATerm> args);
  ATerm mk_ite(ATerm c, ATerm t, ATerm e);
  /// Equality; folds syntactic identity and distinct constants.
  ATerm mk_eq(ATerm a, ATerm b);
  ATerm mk_not(ATerm a);
  ATerm mk_and(std::vector<ATerm> args);
  ATerm mk_or(std::vector<ATerm> args);
  ATerm mk_and(ATerm a, ATerm b) { return mk_and(std::vector<ATerm>{a, b}); }
  ATerm mk_or(ATerm a, ATerm b) { return mk_or(std::vector<ATerm>{a, b}); }
  ATerm mk_implies(ATerm a, ATerm b) { return mk_or(mk_not(a), b); }

  /// Replaces symbol leaves according to the map (simultaneously).
  ATerm rename(ATerm t, const std::unordered_map<Sym, Sym>& m);
  /// Replaces subterms according to the map (simultaneously, top-down).
  ATerm substitute(ATerm t, const std::unordered_map<ATerm, ATerm>& m);

  /// Next-frame copy "x'" of a variable and the inverse lookup.
  Sym primed(Sym v);
  Sym unprimed(Sym v) const;
  bool is_primed(Sym v) const;
  /// Timed copy "x@i" of a current-frame variable.
  Sym timed(Sym v, unsigned step);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const ANode* n) const { return n->hash; }
  };
  struct Eq {
    bool operator()(const ANode* a, const ANode* b) const;
  };
  ATerm intern(ANode n);
  Sym add_symbol(Symbol s);

  std::deque<Symbol> syms_;
  std::unordered_map<std::string, Sym> by_name_;
  std::deque<ANode> nodes_;
  std::unordered_set<const ANode*, Hash, Eq> table_;
  ATerm true_ = nullptr;
  ATerm false_ = nullptr;
};

/// Literal over an abstract atom (or any boolean abstract term).
struct ALit {
  ATerm atom;
  bool neg = false;

  ALit operator~() const { return ALit{atom, !neg}; }
  friend bool operator==(const ALit& a, const ALit& b) {
    return a.atom == b.atom && a.neg == b.neg;
  }
  friend bool operator<(const ALit& a, const ALit& b) {
    return a.atom->id != b.atom->id ? a.atom->id < b.atom->id : a.neg < b.neg;
  }
};

using AClause = std::vector<ALit>;

/// Conjunction of clauses.
struct AbstractFormula {
  std::vector<AClause> clauses;

  void add_unit(ATerm t, bool neg = false) { clauses.push_back({ALit{t, neg}}); }
  void add(AClause c) { clauses.push_back(std::move(c)); }
  void append(const AbstractFormula& f) {
    clauses.insert(clauses.end(), f.clauses.begin(), f.clauses.end());
  }
  bool empty() const { return clauses.empty(); }
  /// The formula as one boolean term.
  ATerm to_term(AbstractContext& ctx) const;
};

ATerm lit_term(AbstractContext& ctx, const ALit& l);

/// Symbols occurring in terms / formulas.
void collect_symbols(ATerm t, SymSet& out);
SymSet symb(ATerm t);
SymSet symb(const AbstractFormula& f);

/// Post-order listing of the DAG below the roots.
std::vector<ATerm> atopo_order(const std::vector<ATerm>& roots);

/// Compact infix printer, e.g. "LE(y,x)", "ADD(x,1)=y".
std::string to_string(ATerm t);
std::string to_string(const ALit& l);
std::string to_string(const AClause& c);

/// SMT-LIB2 script asserting the formula (one uninterpreted sort per width).
std::string to_smtlib(const AbstractFormula& f);
/// SMT-LIB2 expression of a single term (names pipe-quoted).
std::string to_smt_term(ATerm t);

}  // namespace dpmc
