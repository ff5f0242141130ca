#include "support.hpp"

#include "dpmc/bitblast.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/oracle.hpp"

namespace dpmc::test {

std::string data_path(const std::string& name) { return std::string(DPMC_TEST_DATA) + "/" + name; }

DplAudit& dpl_audit() {
  static DplAudit a;
  return a;
}

bool gamma_valid(const AbstractionMap& map, ATerm f, bool* exhaustive) {
  const Term t = map.gamma(f);
  try {
    const bool ok = bv_valid_exhaustive(t).valid;
    if (exhaustive) *exhaustive = true;
    return ok;
  } catch (const TooLarge&) {
    if (exhaustive) *exhaustive = false;
    return !bv_check(map.tm().mk_not(t)).sat;
  }
}

void audit_dpls(const AbstractionMap& map, const LemmaStore& lemmas) {
  auto& a = dpl_audit();
  for (const Lemma& l : lemmas.dpl()) {
    bool ex = false;
    ++a.checked;
    if (!gamma_valid(map, l.formula, &ex)) a.violations.push_back(l.origin + " " + to_string(l.formula));
    if (ex) ++a.exhaustive;
  }
}

void audit_verdict(const Verdict& v) {
  if (v.system && v.system->map) audit_dpls(*v.system->map, v.lemmas);
}

ATerm Fixture::var(const std::string& name, unsigned width) {
  return map.alpha(tm->mk_var(name, Sort::bv(width), VarRole::State));
}

ATerm Fixture::app(OpKind op, std::vector<ATerm> args) {
  const Sym f = ctx->ufun(op, args[0]->sort.width);
  return ctx->mk_app(f, std::move(args));
}

}  // namespace dpmc::test
