#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "racegroups/grouping.hpp"
#include "racegroups/longterm.hpp"
#include "racegroups/report.hpp"
#include "racegroups/synth.hpp"

namespace rg = racegroups;

namespace {

const rg::GeneratedRace& race(std::uint32_t athletes, std::uint32_t cps) {
  static std::map<std::pair<std::uint32_t, std::uint32_t>, rg::GeneratedRace> cache;
  auto it = cache.find({athletes, cps});
  if (it == cache.end()) {
    rg::GeneratorConfig c;
    c.athletes = athletes;
    c.control_points = cps;
    c.pace_bands = 50;
    c.seed = 1;
    it = cache.emplace(std::pair{athletes, cps}, rg::generate(c)).first;
  }
  return it->second;
}

const rg::GeneratedRace& crowd() {
  static const rg::GeneratedRace r = [] {
    rg::GeneratorConfig c;
    c.mode = rg::GeneratorMode::Crowd;
    c.athletes = 20'000;
    c.control_points = 12;
    c.resolution = 1000;
    return rg::generate(c);
  }();
  return r;
}

void BM_GroupingEngine(benchmark::State& state) {
  const auto& events = race(static_cast<std::uint32_t>(state.range(0)), 100).events;
  for (auto _ : state) {
    rg::GroupingEngine engine(rg::Params{});
    std::vector<rg::EngineOutput> out;
    for (const auto& e : events) {
      out.clear();
      engine.ingest(e, out);
    }
    engine.finalize_all(out);
    benchmark::DoNotOptimize(engine.group_count(0));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events.size()));
}
BENCHMARK(BM_GroupingEngine)->Arg(2'500)->Arg(12'500)->Arg(25'000)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const auto& events = race(static_cast<std::uint32_t>(state.range(0)), 100).events;
  rg::RunConfig config;
  for (auto _ : state) {
    auto report = rg::run(config, events);
    benchmark::DoNotOptimize(report.longest);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * events.size()));
}
BENCHMARK(BM_Pipeline)->Arg(2'500)->Arg(12'500)->Arg(25'000)->Unit(benchmark::kMillisecond);

void BM_Labels(benchmark::State& state) {
  const auto report = rg::run(rg::RunConfig{}, race(25'000, 100).events);
  for (auto _ : state) {
    auto labels = rg::compute_labels(report.graph);
    benchmark::DoNotOptimize(labels.related.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * report.graph.vertex_count()));
}
BENCHMARK(BM_Labels)->Unit(benchmark::kMicrosecond);

void BM_EpsilonSweep(benchmark::State& state) {
  const std::vector<rg::Millis> eps{0, 1000, 2000, 5000, 10'000, 30'000, 100'000};
  rg::RunConfig config;
  for (auto _ : state) {
    auto rows = rg::epsilon_sweep(config, crowd().events, eps);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * crowd().events.size() * eps.size()));
}
BENCHMARK(BM_EpsilonSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
