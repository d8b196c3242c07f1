#include <benchmark/benchmark.h>

#include "qconv/qcnn_model.hpp"
#include "qconv/random.hpp"
#include "qconv/trainer.hpp"

using namespace qconv;

namespace {

ModelConfig make_config(int channels) {
    ModelConfig cfg;
    cfg.channels_between_layers = channels;
    cfg.channel_register_qubits = default_channel_register_qubits(channels);
    cfg.num_classes = 4;
    return cfg;
}

} // namespace

static void BM_Forward(benchmark::State &state) {
    const ModelConfig cfg = make_config(static_cast<int>(state.range(0)));
    Rng rng(3);
    const ParamVector params = initial_params(cfg, 11);
    const auto encoded =
        random_real_unit_vector(std::size_t{1} << cfg.data_qubits, rng);
    for (auto _ : state) {
        auto scores = forward(cfg, params, encoded);
        benchmark::DoNotOptimize(scores.probabilities.data());
    }
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(4)->Arg(8);

static void BM_AdjointGradient(benchmark::State &state) {
    const ModelConfig cfg = make_config(static_cast<int>(state.range(0)));
    Rng rng(3);
    const ParamVector params = initial_params(cfg, 11);
    std::vector<EncodedSample> batch = {
        {random_real_unit_vector(std::size_t{1} << cfg.data_qubits, rng), 0}};
    for (auto _ : state) {
        auto grad = loss_gradient(cfg, params, batch, GradientMode::Adjoint);
        benchmark::DoNotOptimize(grad.data());
    }
}
BENCHMARK(BM_AdjointGradient)->Arg(1)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
