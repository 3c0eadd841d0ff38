#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "ndviz/engine.hpp"
#include "ndviz/machine_json.hpp"

using namespace ndviz;

namespace {

Machine load(const char* name) { return load_machine(std::string(NDVIZ_MACHINES_DIR) + "/" + name); }

Word random_word(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  Word w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(rng() % 2 ? "a" : "b");
  return w;
}

// P with the dead state: every prefix keeps a wide frontier alive.
void run_p(benchmark::State& state, bool parallel) {
  const Machine m = load("p.json");
  const Word w = random_word(static_cast<std::size_t>(state.range(0)), 7);
  ExploreOptions o;
  o.add_dead = true;
  o.max_steps = 1000;
  std::size_t nodes = 0;
  for (auto _ : state) {
    const ComputationForest f = parallel ? explore(m, w, o) : explore_serial(m, w, o);
    nodes = f.nodes().size();
    benchmark::DoNotOptimize(nodes);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}

// A stack-growing PDA: many distinct stacks per level.
Machine wide_pda() {
  MachineParts p;
  p.kind = MachineKind::Pda;
  p.states = {"S", "F"};
  p.sigma = {"a", "b"};
  p.gamma = {"X", "Y"};
  p.start = "S";
  p.finals = {"F"};
  p.rules = {
      Rule{"S", std::nullopt, {}, "S", {"X"}},
      Rule{"S", std::nullopt, {}, "S", {"Y"}},
      Rule{"S", "a", {"X"}, "S", {}},
      Rule{"S", "b", {"Y"}, "S", {}},
      Rule{"S", std::nullopt, {}, "F", {}},
  };
  return Machine(std::move(p));
}

void run_wide(benchmark::State& state, bool parallel) {
  const Machine m = wide_pda();
  const Word w = random_word(4, 3);
  ExploreOptions o;
  o.max_steps = static_cast<std::size_t>(state.range(0));
  std::size_t nodes = 0;
  for (auto _ : state) {
    const ComputationForest f = parallel ? explore(m, w, o) : explore_serial(m, w, o);
    nodes = f.nodes().size();
    benchmark::DoNotOptimize(nodes);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_P_serial(benchmark::State& s) { run_p(s, false); }
void BM_P_parallel(benchmark::State& s) { run_p(s, true); }
void BM_Wide_serial(benchmark::State& s) { run_wide(s, false); }
void BM_Wide_parallel(benchmark::State& s) { run_wide(s, true); }

}  // namespace

BENCHMARK(BM_P_serial)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_P_parallel)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wide_serial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wide_parallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
