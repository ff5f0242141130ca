#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpmc/abstraction.hpp"
#include "dpmc/cegar.hpp"
#include "dpmc/lemma_store.hpp"

namespace dpmc::test {

std::string data_path(const std::string& name);

/// Running tally of DPLs whose bit-level image was checked for validity.
struct DplAudit {
  std::uint64_t checked = 0;
  std::uint64_t exhaustive = 0;
  std::vector<std::string> violations;
};

DplAudit& dpl_audit();

/// True when the concrete image of f is valid for every assignment.
bool gamma_valid(const AbstractionMap& map, ATerm f, bool* exhaustive = nullptr);

/// Checks every DPL of the store and records the outcome in dpl_audit().
void audit_dpls(const AbstractionMap& map, const LemmaStore& lemmas);
void audit_verdict(const Verdict& v);

/// Abstract variables built from concrete ones so that gamma applies.
struct Fixture {
  std::shared_ptr<TermManager> tm = std::make_shared<TermManager>();
  std::shared_ptr<AbstractContext> ctx = std::make_shared<AbstractContext>();
  AbstractionMap map{tm, ctx};

  ATerm var(const std::string& name, unsigned width);
  ATerm k(std::uint64_t v, unsigned width) { return ctx->mk_const(v, width); }
  ATerm app(OpKind op, std::vector<ATerm> args);
};

}  // namespace dpmc::test
