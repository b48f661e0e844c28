#include <benchmark/benchmark.h>

#include "scn/dsl/compile.hpp"
#include "scn/logic/abstract.hpp"
#include "scn/logic/instance.hpp"
#include "scn/logical/logical_scenario.hpp"
#include "scn/monitor/monitor.hpp"
#include "scn/rural/rural.hpp"

using namespace scn;

namespace {

const char* const kDrive = R"(
schema planar { x: m, y: m, vx: m/s, vy: m/s }
logical drive {
  start { planar.x = -50 m, planar.y = 100 m, planar.vx = 10 m/s, planar.vy = -5 m/s }
  bind constant_velocity(on=(x, y), vx=10 m/s, vy=-5 m/s)
  horizon 20 s step 0.1 s
}
logical slope {
  param v: range(1 m/s, 3 m/s)
  start { planar.x = 0 m, planar.y = 0 m, planar.vx = v, planar.vy = 0 m/s }
  bind constant_velocity(on=(x, y), vx=v)
  horizon 10 s step 0.1 s
}
abstract reach {
  logic ex
  constraint scene(x=-50, y=100, vx=10, vy=-5)
    and eventually (scene(x=150, y=0, vx=10, vy=-5) or scene(x=0, y=0, vx=0, vy=0))
}
)";

void EnumerateBinary(benchmark::State& state) {
  const auto bin = make_binary_instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(*bin, Formula::truth()));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(EnumerateBinary)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

void MonitorWord(benchmark::State& state) {
  const auto spec = dsl::compile(kDrive);
  const Trajectory c = realize(spec.logical("drive"), std::vector<double>{});
  const AbstractScenario a = spec.abstract_scenario("reach");
  for (auto _ : state) benchmark::DoNotOptimize(monitor_word(c, a));
}
BENCHMARK(MonitorWord)->Unit(benchmark::kMicrosecond);

void SampleLogical(benchmark::State& state) {
  const auto spec = dsl::compile(kDrive);
  const auto& l = spec.logical("slope");
  for (auto _ : state) benchmark::DoNotOptimize(sample(l, {}, 1000, 1, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(SampleLogical)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void Invert(benchmark::State& state) {
  const auto spec = dsl::compile(kDrive);
  const auto& l = spec.logical("slope");
  const Trajectory c = realize(l, std::vector<double>{2.0});
  for (auto _ : state) benchmark::DoNotOptimize(invert(l, c, 1e-6));
}
BENCHMARK(Invert)->Unit(benchmark::kMicrosecond);

void ParseSpec(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dsl::parse(kDrive));
}
BENCHMARK(ParseSpec)->Unit(benchmark::kMicrosecond);

void SynthesizeRural(benchmark::State& state) {
  RuralConfig cfg;
  cfg.n = 3;
  cfg.m = 2;
  const auto grid = rural_grid(cfg);
  const auto choices = enumerate_choices(cfg.n, cfg.m);
  const auto a = rural_formula(cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    const Trajectory c = synthesize(choices[i++ % choices.size()], cfg, grid);
    benchmark::DoNotOptimize(monitor_word(c, a));
  }
}
BENCHMARK(SynthesizeRural)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
