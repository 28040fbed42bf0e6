#include <benchmark/benchmark.h>

#include "uavg/monte_carlo.hpp"

using namespace uavg;

static void BM_SingleQubitEnsemble(benchmark::State& state) {
    McConfig cfg;
    cfg.samples = 10'000;
    cfg.threads = 1;
    const GateSpec spec = named_gate(GateName::H);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_ensemble(spec, NoiseSpec::gaussian(0.01), static_cast<int>(state.range(0)), cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}
BENCHMARK(BM_SingleQubitEnsemble)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_FusionEnsemble(benchmark::State& state) {
    McConfig cfg;
    cfg.samples = 10'000;
    cfg.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            estimate_fusion(GateFamily::four_mode, NoiseSpec::gaussian(0.005), static_cast<int>(state.range(0)), cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.samples));
}
BENCHMARK(BM_FusionEnsemble)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);
