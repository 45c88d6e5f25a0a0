#include <benchmark/benchmark.h>

#include "thzsim/event_queue.hpp"
#include "thzsim/simulation.hpp"

using namespace thzsim;

static void BM_EventQueueScheduleRun(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        EventQueue q;
        std::uint64_t sink = 0;
        for (int i = 0; i < n; ++i) {
            q.schedule((i * 7919) % 100000 + 1, EventKind::SimEnd, 0,
                       [&sink] { ++sink; });
        }
        q.run_until(200000);
        benchmark::DoNotOptimize(sink);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueueScheduleRun)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_SimulationRun(benchmark::State& state) {
    SimConfig cfg;
    cfg.plant = build_plant({52.36, 35.4, 8.5}, default_machine_layout());
    cfg.mode = static_cast<RoutingMode>(state.range(0));
    cfg.n_ues = static_cast<int>(state.range(1));
    cfg.t_sim = 50 * kMicrosecond;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        cfg.seed = seed++;
        SimResult r = Simulation(cfg).run();
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_SimulationRun)
    ->Args({0, 4})
    ->Args({1, 12})
    ->Args({2, 12});

BENCHMARK_MAIN();
