#include <benchmark/benchmark.h>

#include "dpmc/abstraction.hpp"
#include "dpmc/btor2.hpp"
#include "dpmc/cegar.hpp"
#include "dpmc/oracle.hpp"
#include "dpmc/propagation.hpp"

namespace {

void BM_PropagateInit(benchmark::State& state) {
  const auto ts = dpmc::parse_btor2_file(DPMC_DATA_DIR "/fig2.btor2");
  auto sys = dpmc::dp_abstract(ts);
  for (auto _ : state) {
    dpmc::LemmaStore lemmas;
    dpmc::AbstractFormula phi;
    phi.add_unit(sys.init);
    phi.add_unit(sys.prop, true);
    benchmark::DoNotOptimize(dpmc::propagate(*sys.ctx, phi, 20, lemmas));
  }
}
BENCHMARK(BM_PropagateInit);

void BM_Fig2(benchmark::State& state) {
  const auto ts = dpmc::parse_btor2_file(DPMC_DATA_DIR "/fig2.btor2");
  dpmc::CegarConfig cfg;
  cfg.propagation = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(dpmc::dp_ic3(ts, cfg).kind);
}
BENCHMARK(BM_Fig2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RandomSystems(benchmark::State& state) {
  dpmc::CegarConfig cfg;
  cfg.propagation = state.range(0) != 0;
  for (auto _ : state)
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      benchmark::DoNotOptimize(dpmc::dp_ic3(dpmc::random_system(seed), cfg).kind);
}
BENCHMARK(BM_RandomSystems)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
