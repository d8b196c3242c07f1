#include <benchmark/benchmark.h>

#include "qconv/random.hpp"
#include "qconv/statevector.hpp"

using namespace qconv;

static void BM_ApplyGate(benchmark::State &state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    Rng rng(7);
    GateApplication gate;
    gate.unitary = random_unitary(std::size_t{1} << n, rng);
    for (int q = 0; q < n; ++q) {
        gate.targets.push_back(q);
    }
    StateVector sv = StateVector::from_amplitudes(m, random_state(m, rng));
    for (auto _ : state) {
        apply_gate(sv, gate);
        benchmark::DoNotOptimize(sv.mutable_amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << m));
}
BENCHMARK(BM_ApplyGate)
    ->Args({10, 1})
    ->Args({10, 2})
    ->Args({10, 4})
    ->Args({14, 4})
    ->Args({16, 4});

static void BM_MarginalProbabilities(benchmark::State &state) {
    const int m = static_cast<int>(state.range(0));
    Rng rng(7);
    StateVector sv = StateVector::from_amplitudes(m, random_state(m, rng));
    std::vector<int> kept;
    for (int q = 0; q < m - 3; ++q) {
        kept.push_back(q);
    }
    for (auto _ : state) {
        auto p = marginal_probabilities(sv, kept);
        benchmark::DoNotOptimize(p.data());
    }
}
BENCHMARK(BM_MarginalProbabilities)->Arg(12)->Arg(14);

BENCHMARK_MAIN();
