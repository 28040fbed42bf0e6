#include <benchmark/benchmark.h>

#include "uavg/gates.hpp"
#include "uavg/photonic.hpp"

using namespace uavg;

static void BM_TwoPhotonApply(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    const ModeMatrix m = embed(four_mode_matrix(FourModeParams{}), std::vector<int>{0, 1, 2, 3}, modes);
    const auto in = PhotonicState::basis(FockOccupation::pair(modes, 0, 2));
    for (auto _ : state) benchmark::DoNotOptimize(uavg::apply(m, in));
}
BENCHMARK(BM_TwoPhotonApply)->Arg(4)->Arg(16)->Arg(64);

static void BM_SinglePhotonApply(benchmark::State& state) {
    const int modes = static_cast<int>(state.range(0));
    const ModeMatrix m = embed(single_qubit_matrix(named_gate(GateName::H)), std::vector<int>{0, 1}, modes);
    std::vector<Complex> amps(static_cast<std::size_t>(modes));
    amps[0] = 1.0;
    const auto in = PhotonicState::from_amplitudes(std::span<const Complex>(amps));
    for (auto _ : state) benchmark::DoNotOptimize(uavg::apply(m, in));
}
BENCHMARK(BM_SinglePhotonApply)->Arg(2)->Arg(16)->Arg(64);
