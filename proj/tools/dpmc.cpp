// dpmc: word-level safety checking of BTOR2 designs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpmc/btor2.hpp"
#include "dpmc/cegar.hpp"
#include "dpmc/errors.hpp"
#include "dpmc/oracle.hpp"

namespace {

std::string bits(std::uint64_t v, unsigned w) {
  std::string s(w, '0');
  for (unsigned i = 0; i < w; ++i)
    if ((v >> i) & 1) s[w - 1 - i] = '1';
  return s;
}

// BTOR2-witness-like listing: states and inputs of every frame.
void print_witness(const dpmc::TransitionSystem& ts, const dpmc::ConcreteTrace& tr) {
  std::cout << "sat\nb0\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::cout << "#" << k << "\n";
    for (std::size_t i = 0; i < ts.state_vars.size(); ++i) {
      const dpmc::Term v = ts.state_vars[i];
      std::cout << i << " " << bits(tr[k].state.at(v), v->sort.width) << " " << v->name << "@" << k
                << "\n";
    }
    std::cout << "@" << k << "\n";
    for (std::size_t i = 0; i < ts.input_vars.size(); ++i) {
      const dpmc::Term v = ts.input_vars[i];
      std::cout << i << " " << bits(tr[k].inputs.at(v), v->sort.width) << " " << v->name << "@" << k
                << "\n";
    }
  }
  std::cout << ".\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-level model checker with datapath abstraction and propagation"};
  std::string input, mode = "prop-on", dump_lemmas, dump_queries;
  int prop_bound = 20, max_frames = 1000, max_refinements = 10000;
  std::int64_t theory_budget = 100000;
  bool witness = false, stats_json = false, oracle_check = false;
  app.add_option("input", input, "BTOR2 file")->required();
  app.add_option("--mode", mode, "prop-on or prop-off")
      ->check(CLI::IsMember({"prop-on", "prop-off"}));
  app.add_option("--prop-bound", prop_bound, "propagation iteration bound")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-frames", max_frames, "IC3 frame budget")->check(CLI::PositiveNumber);
  app.add_option("--max-refinements", max_refinements, "refinement budget")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--theory-budget", theory_budget, "theory conflicts per EUF query");
  app.add_option("--dump-lemmas", dump_lemmas, "write DPL/DRL lemmas to this file");
  app.add_option("--dump-queries", dump_queries, "write every EUF query to this directory");
  app.add_flag("--witness", witness, "print a counterexample trace on UNSAFE");
  app.add_flag("--stats-json", stats_json, "print run statistics as one JSON line");
  app.add_flag("--oracle-check", oracle_check, "compare with explicit-state search");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  dpmc::TransitionSystem ts;
  try {
    ts = dpmc::parse_btor2_file(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  if (oracle_check && ts.state_bits() + ts.input_bits() > 20) {
    std::cerr << "error: --oracle-check needs at most 20 state and input bits\n";
    return 3;
  }
  if (!dump_queries.empty()) std::filesystem::create_directories(dump_queries);

  dpmc::CegarConfig cfg;
  cfg.propagation = mode == "prop-on";
  cfg.prop_bound = prop_bound;
  cfg.max_frames = max_frames;
  cfg.max_refinements = max_refinements;
  cfg.euf.theory_budget = theory_budget;
  cfg.euf.dump_dir = dump_queries;
  dpmc::Verdict v = dpmc::dp_ic3(ts, cfg);

  if (oracle_check && v.kind != dpmc::VerdictKind::Unknown) {
    const auto ref = dpmc::bfs_reachability(ts);
    const bool agree = ref.reachable == (v.kind == dpmc::VerdictKind::Unsafe);
    std::cerr << "oracle-check: " << (agree ? "agrees" : "MISMATCH") << "\n";
    if (!agree) {
      v.kind = dpmc::VerdictKind::Unknown;
      v.reason = "oracle mismatch";
    }
  }

  std::cout << dpmc::to_string(v.kind) << "\n";
  if (v.kind == dpmc::VerdictKind::Unknown && !v.reason.empty())
    std::cerr << "reason: " << v.reason << "\n";
  if (witness && v.kind == dpmc::VerdictKind::Unsafe) print_witness(ts, v.witness);
  if (!dump_lemmas.empty()) {
    std::ofstream out(dump_lemmas);
    v.lemmas.dump(out);
  }
  if (stats_json) {
    nlohmann::ordered_json j;
    j["verdict"] = std::string(dpmc::to_string(v.kind));
    j["refinements"] = v.stats.refinements;
    j["dpl_count"] = v.stats.dpl_count;
    j["drl_count"] = v.stats.drl_count;
    j["frames"] = v.stats.ic3.frames;
    j["euf_queries"] = v.stats.ic3.euf_queries;
    j["queries_skipped_by_propagation"] = v.stats.ic3.queries_skipped_by_propagation;
    j["wall_ms"] = static_cast<std::int64_t>(v.stats.wall_ms);
    std::cout << j.dump() << "\n";
  }
  switch (v.kind) {
    case dpmc::VerdictKind::Safe: return 0;
    case dpmc::VerdictKind::Unsafe: return 1;
    case dpmc::VerdictKind::Unknown: break;
  }
  return 2;
}
