#include "dpmc/lemma_store.hpp"

#include <algorithm>
#include <ostream>

namespace dpmc {

bool LemmaStore::add_dpl(ATerm f, std::string origin) {
  if (f->kind == AKind::True || !seen_.insert(f).second) return false;
  dpl_.push_back({f, std::move(origin)});
  return true;
}

bool LemmaStore::add_drl(ATerm f, std::string origin) {
  if (f->kind == AKind::True || !seen_.insert(f).second) return false;
  drl_.push_back({f, std::move(origin)});
  return true;
}

bool LemmaStore::add_constant(ATerm c) {
  if (std::find(consts_.begin(), consts_.end(), c) != consts_.end()) return false;
  consts_.push_back(c);
  return true;
}

AbstractFormula LemmaStore::formula() const {
  AbstractFormula f;
  for (const auto& l : drl_) f.add_unit(l.formula);
  for (const auto& l : dpl_) f.add_unit(l.formula);
  return f;
}

void LemmaStore::dump(std::ostream& out) const {
  for (const auto& l : dpl_) out << "DPL " << to_smt_term(l.formula) << "\n";
  for (const auto& l : drl_) out << "DRL " << to_smt_term(l.formula) << "\n";
}

}  // namespace dpmc
