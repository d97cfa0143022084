#include <benchmark/benchmark.h>

#include "dirl/dirl.hpp"

using namespace dirl;

namespace {

const RoomsEnv& env9() {
  static const RoomsEnv env(*preset_layout("rooms9"));
  return env;
}

const AbstractGraph& graph() {
  static const AbstractGraph g = compile(parse_spec("reach(2,0) ensuring avoid(1,0)", env9().predicates()));
  return g;
}

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

// One ARS iteration: 2N antithetic episodes.
void BM_Directions(benchmark::State& st) {
  ArsConfig cfg;
  const StartDistribution start{&env9(), {}};
  const PolicyParams p = PolicyParams::initial(2, cfg.hidden, 2, 1);
  std::size_t it = 0;
  for (auto _ : st) {
    DirectionBatch b = evaluate_directions(env9(), graph(), 0, p, ObsNormalizer{}, start, cfg, it++, mode(st));
    benchmark::DoNotOptimize(b.returns.data());
  }
  st.SetItemsProcessed(static_cast<long>(st.iterations() * 2 * cfg.directions));
}
BENCHMARK(BM_Directions)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_EdgeEstimate(benchmark::State& st) {
  EdgePolicy pol;
  pol.params = PolicyParams::initial(2, 30, 2, 2);
  const StartDistribution start{&env9(), {}};
  std::uint64_t seed = 0;
  for (auto _ : st) {
    EdgeEstimate e = estimate_edge_prob(env9(), graph(), 0, pol, start, 20, 200, seed++, mode(st));
    benchmark::DoNotOptimize(e.prob.value);
  }
  st.SetItemsProcessed(static_cast<long>(st.iterations() * 200));
}
BENCHMARK(BM_EdgeEstimate)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& st) {
  EdgePolicy pol;
  pol.params = PolicyParams::initial(2, 30, 2, 3);
  const PathPolicy pp{graph(), {0, 1}, {0}, {pol}};
  std::uint64_t seed = 0;
  for (auto _ : st) {
    Evaluation ev = evaluate_policy(pp, env9(), 20, 1000, seed++, mode(st));
    benchmark::DoNotOptimize(ev.success_prob);
  }
  st.SetItemsProcessed(static_cast<long>(st.iterations() * 1000));
}
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
