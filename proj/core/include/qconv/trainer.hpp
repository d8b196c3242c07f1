// Cross-entropy training of the classifier with Adam. Gradients flow through
// the simulator in one of three modes: an adjoint-style reverse sweep over
// the elementary circuit (default), the parameter-shift rule applied per
// feature, or central finite differences over the loss.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qconv/mnist_io.hpp"
#include "qconv/qcnn_model.hpp"

namespace qconv {

enum class GradientMode { Adjoint, ParameterShift, FiniteDifference };

struct TrainConfig {
    int epochs = 10;
    double learning_rate = 0.1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    int batch_size = 32; // 0 = full batch
    std::uint64_t seed = 0;
    int train_per_class = 500;
    int test_per_class = 200;
    GradientMode gradient_mode = GradientMode::Adjoint;
    double gradient_clip = 1e3;     // elementwise NaN guard
    double probability_floor = 1e-12;

    void validate() const;
};

/// One labeled, amplitude-ready input (length 2^data_qubits, unit norm).
struct EncodedSample {
    std::vector<double> encoded;
    int label = 0;
};

/// Encode every sample of a dataset through the image pipeline.
std::vector<EncodedSample> encode_dataset(const ModelConfig &cfg,
                                          const Dataset &data);

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0; // mean batch loss over the epoch
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    int categories_learned = 0;
};

struct Metrics {
    std::vector<EpochRecord> epochs;
    double final_train_accuracy = 0.0;
    double final_test_accuracy = 0.0;
    std::vector<std::vector<int>> confusion; // [true][predicted]
    int categories_learned = 0;              // classes with recall >= 0.5
    long gradient_clip_events = 0;
    double wall_clock_seconds = 0.0;
};

/// -log(probs[label]) with the probability floored before the log.
double cross_entropy(std::span<const double> probs, int label,
                     double floor = 1e-12);

/// Mean gradient of the cross-entropy over the batch, by the chosen mode.
/// All modes agree: adjoint and parameter-shift to ~1e-8 absolute, finite
/// differences to ~1e-4 relative.
std::vector<double> loss_gradient(const ModelConfig &cfg,
                                  const ParamVector &params,
                                  std::span<const EncodedSample> batch,
                                  GradientMode mode,
                                  double probability_floor = 1e-12);

/// Mean cross-entropy of the batch.
double batch_loss(const ModelConfig &cfg, const ParamVector &params,
                  std::span<const EncodedSample> batch,
                  double probability_floor = 1e-12);

struct TrainResult {
    ParamVector params;
    Metrics metrics;
};

/// Parameters drawn uniformly from (-pi, pi], seeded.
ParamVector initial_params(const ModelConfig &cfg, std::uint64_t seed);

/// Adam over seeded-shuffled batches; deterministic given (seed, configs,
/// data). Records per-epoch metrics; a non-finite loss aborts with a
/// diagnostic. epochs == 0 returns the initial parameters untrained.
TrainResult train(const TrainConfig &cfg, const ModelConfig &model_cfg,
                  std::span<const EncodedSample> train_data,
                  std::span<const EncodedSample> test_data);

/// Accuracy, confusion matrix and categories-learned on a labeled set.
Metrics evaluate(const ModelConfig &cfg, const ParamVector &params,
                 std::span<const EncodedSample> test_data);

} // namespace qconv
