#include <benchmark/benchmark.h>

#include <vector>

#include "uavg/averaging.hpp"
#include "uavg/gates.hpp"
#include "uavg/random.hpp"

using namespace uavg;

static void BM_BuildTree(benchmark::State& state) {
    AveragingConfig cfg;
    cfg.levels = static_cast<int>(state.range(0));
    cfg.encoder_noise = EncoderNoise{1e-4};
    SampleStream rng(2, 0);
    const GateSpec spec = named_gate(GateName::H);
    std::vector<ModeMatrix> units;
    for (int j = 0; j < cfg.copies(); ++j) units.push_back(sample_matrix(spec, NoiseSpec::gaussian(0.01), rng));
    const auto deltas = sample_encoder_deltas(cfg, rng);
    for (auto _ : state) benchmark::DoNotOptimize(build_tree(cfg, units, deltas));
}
BENCHMARK(BM_BuildTree)->DenseRange(1, 5);

static void BM_AveragedOperator(benchmark::State& state) {
    SampleStream rng(3, 0);
    const GateSpec spec = FourModeParams{};
    std::vector<ModeMatrix> units;
    for (int j = 0; j < state.range(0); ++j) units.push_back(sample_matrix(spec, NoiseSpec::gaussian(0.01), rng));
    for (auto _ : state) benchmark::DoNotOptimize(averaged_operator(units));
}
BENCHMARK(BM_AveragedOperator)->RangeMultiplier(4)->Range(1, 256);
