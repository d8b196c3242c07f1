#include "qconv/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qconv/random.hpp"

namespace qconv {

void TrainConfig::validate() const {
    if (epochs < 0) {
        throw std::invalid_argument("TrainConfig: epochs must be >= 0");
    }
    if (learning_rate <= 0.0 || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("TrainConfig: learning_rate must be positive");
    }
    if (batch_size < 0) {
        throw std::invalid_argument("TrainConfig: batch_size must be >= 0");
    }
    if (adam_beta1 <= 0.0 || adam_beta1 >= 1.0 || adam_beta2 <= 0.0 ||
        adam_beta2 >= 1.0 || adam_epsilon <= 0.0) {
        throw std::invalid_argument("TrainConfig: invalid Adam constants");
    }
    if (train_per_class < 0 || test_per_class < 0) {
        throw std::invalid_argument("TrainConfig: per-class counts must be >= 0");
    }
    if (gradient_clip <= 0.0 || probability_floor <= 0.0) {
        throw std::invalid_argument("TrainConfig: clip and floor must be positive");
    }
}

double cross_entropy(std::span<const double> probs, int label, double floor) {
    if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
        throw std::out_of_range("cross_entropy: label " + std::to_string(label) +
                                " out of range");
    }
    return -std::log(std::max(probs[label], floor));
}

std::vector<EncodedSample> encode_dataset(const ModelConfig &cfg,
                                          const Dataset &data) {
    std::vector<EncodedSample> out;
    out.reserve(data.samples.size());
    for (const Sample &s : data.samples) {
        out.push_back({encode_image(cfg, to_real_matrix(s, data.rows, data.cols)),
                       s.remapped_label});
    }
    return out;
}

namespace {

/// d(cross-entropy o softmax)/d(logits) = probs - onehot(label).
std::vector<double> logit_gradient(std::span<const double> probs, int label) {
    std::vector<double> g(probs.begin(), probs.end());
    g[static_cast<std::size_t>(label)] -= 1.0;
    return g;
}

/// Per-feature loss sensitivities in the tensor's (c-major) storage order,
/// zero outside the measured channels.
std::vector<double> feature_gradient(const ModelConfig &cfg,
                                     const FeatureTensor &features,
                                     std::span<const double> dlogits) {
    std::vector<double> dfeat(features.values.size(), 0.0);
    const std::uint64_t feature_count = features.feature_count();
    std::uint64_t t = 0;
    for (std::uint64_t j = 1; j <= feature_count; ++j) {
        for (std::uint64_t c = 1;
             c <= static_cast<std::uint64_t>(cfg.measured_channels); ++c, ++t) {
            dfeat[(c - 1) * feature_count + (j - 1)] +=
                dlogits[t % cfg.num_classes];
        }
    }
    return dfeat;
}

struct SampleGradient {
    std::vector<double> grad;
    double loss = 0.0;
};

SampleGradient adjoint_sample_gradient(const ModelConfig &cfg,
                                       const ParamVector &params,
                                       const EncodedSample &sample,
                                       double floor) {
    const std::vector<CircuitOp> ops = build_elementary_circuit(cfg, params);

    StateVector phi = prepare_input_state(cfg, sample.encoded);
    for (const CircuitOp &op : ops) {
        apply_gate(phi, op.gate);
    }

    // Classical readout and its sensitivities at the forward point.
    std::vector<int> data_qubits(cfg.data_qubits);
    for (int q = 0; q < cfg.data_qubits; ++q) {
        data_qubits[q] = q;
    }
    const std::vector<double> marginal = marginal_probabilities(phi, data_qubits);
    const FeatureTensor features =
        extract_features(marginal, cfg.readout_layout());
    const std::vector<double> logits =
        aggregate_features(features, cfg.num_classes, cfg.measured_channels);
    const std::vector<double> probs = softmax(logits);
    const std::vector<double> dlogits = logit_gradient(probs, sample.label);
    const std::vector<double> dfeat = feature_gradient(cfg, features, dlogits);

    // Diagonal observable weights over the data register: dL/dF at each
    // feature basis state, zero elsewhere.
    const ConvLayout layout = cfg.readout_layout();
    std::vector<double> data_weight(std::uint64_t{1} << cfg.data_qubits, 0.0);
    for (std::uint64_t c = 1; c <= layout.channels(); ++c) {
        for (std::uint64_t j = 1; j <= layout.stacked_feature_count(); ++j) {
            data_weight[stacked_output_index(layout, j, c)] =
                dfeat[(c - 1) * layout.stacked_feature_count() + (j - 1)];
        }
    }

    // lambda = H |psi_T> with H diagonal; the marginal over ancillas makes
    // every full index inherit the weight of its data-register part.
    const std::uint64_t data_mask = (std::uint64_t{1} << cfg.data_qubits) - 1;
    StateVector lambda = phi;
    for (std::uint64_t i = 0; i < lambda.dim(); ++i) {
        lambda[i] *= data_weight[i & data_mask];
    }

    // Reverse sweep: at step t, phi = G_t..G_1|in> and lambda = (G_{t+1}..
    // G_T)^dag H |psi_T>; a parameterized gate exp(-i theta G/2) contributes
    // Im <lambda| Pi (x) P |phi>, accumulated per (possibly shared) parameter.
    SampleGradient out;
    out.grad.assign(params.size(), 0.0);
    out.loss = cross_entropy(probs, sample.label, floor);

    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const CircuitOp &op = *it;
        if (op.param_index >= 0) {
            StateVector mu = phi;
            project_controls(mu, op.gate.controls);
            GateApplication pauli;
            pauli.unitary = pauli_matrix(op.axis);
            pauli.targets = op.gate.targets;
            apply_gate(mu, pauli);
            cdouble dot{0.0, 0.0};
            for (std::uint64_t i = 0; i < mu.dim(); ++i) {
                dot += std::conj(lambda[i]) * mu[i];
            }
            out.grad[static_cast<std::size_t>(op.param_index)] += dot.imag();
        }
        GateApplication inverse;
        inverse.unitary = adjoint(op.gate.unitary);
        inverse.targets = op.gate.targets;
        inverse.controls = op.gate.controls;
        apply_gate(phi, inverse);
        apply_gate(lambda, inverse);
    }
    return out;
}

SampleGradient shift_sample_gradient(const ModelConfig &cfg,
                                     const ParamVector &params,
                                     const EncodedSample &sample,
                                     double floor) {
    const ForwardTrace trace = forward_trace(cfg, params, sample.encoded);
    const std::vector<double> dlogits =
        logit_gradient(trace.scores.probabilities, sample.label);
    const std::vector<double> dfeat =
        feature_gradient(cfg, trace.features, dlogits);

    // The features are expectation values, so the two-point rule gives their
    // exact derivatives; the classical chain rule does the rest.
    constexpr double shift = std::numbers::pi / 2.0;
    SampleGradient out;
    out.grad.assign(params.size(), 0.0);
    out.loss = cross_entropy(trace.scores.probabilities, sample.label, floor);

    ParamVector shifted = params;
    for (std::size_t t = 0; t < params.size(); ++t) {
        shifted[t] = params[t] + shift;
        const FeatureTensor plus =
            forward_trace(cfg, shifted, sample.encoded).features;
        shifted[t] = params[t] - shift;
        const FeatureTensor minus =
            forward_trace(cfg, shifted, sample.encoded).features;
        shifted[t] = params[t];
        double acc = 0.0;
        for (std::size_t f = 0; f < dfeat.size(); ++f) {
            acc += dfeat[f] * 0.5 * (plus.values[f] - minus.values[f]);
        }
        out.grad[t] = acc;
    }
    return out;
}

SampleGradient fd_sample_gradient(const ModelConfig &cfg,
                                  const ParamVector &params,
                                  const EncodedSample &sample, double floor) {
    constexpr double h = 1e-5;
    SampleGradient out;
    out.grad.assign(params.size(), 0.0);
    out.loss = cross_entropy(
        forward(cfg, params, sample.encoded).probabilities, sample.label, floor);

    ParamVector shifted = params;
    for (std::size_t t = 0; t < params.size(); ++t) {
        shifted[t] = params[t] + h;
        const double plus = cross_entropy(
            forward(cfg, shifted, sample.encoded).probabilities, sample.label,
            floor);
        shifted[t] = params[t] - h;
        const double minus = cross_entropy(
            forward(cfg, shifted, sample.encoded).probabilities, sample.label,
            floor);
        shifted[t] = params[t];
        out.grad[t] = (plus - minus) / (2.0 * h);
    }
    return out;
}

SampleGradient batch_gradient(const ModelConfig &cfg, const ParamVector &params,
                              std::span<const EncodedSample> batch,
                              GradientMode mode, double floor) {
    if (batch.empty()) {
        throw std::invalid_argument("gradient: empty batch");
    }
    SampleGradient total;
    total.grad.assign(params.size(), 0.0);
    for (const EncodedSample &sample : batch) {
        SampleGradient g;
        switch (mode) {
        case GradientMode::Adjoint:
            g = adjoint_sample_gradient(cfg, params, sample, floor);
            break;
        case GradientMode::ParameterShift:
            g = shift_sample_gradient(cfg, params, sample, floor);
            break;
        case GradientMode::FiniteDifference:
            g = fd_sample_gradient(cfg, params, sample, floor);
            break;
        }
        for (std::size_t t = 0; t < total.grad.size(); ++t) {
            total.grad[t] += g.grad[t];
        }
        total.loss += g.loss;
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double &g : total.grad) {
        g *= inv;
    }
    total.loss *= inv;
    return total;
}

} // namespace

std::vector<double> loss_gradient(const ModelConfig &cfg,
                                  const ParamVector &params,
                                  std::span<const EncodedSample> batch,
                                  GradientMode mode, double probability_floor) {
    return batch_gradient(cfg, params, batch, mode, probability_floor).grad;
}

double batch_loss(const ModelConfig &cfg, const ParamVector &params,
                  std::span<const EncodedSample> batch,
                  double probability_floor) {
    const std::vector<GateApplication> circuit = build_circuit(cfg, params);
    double total = 0.0;
    for (const EncodedSample &sample : batch) {
        total += cross_entropy(
            forward_trace(cfg, circuit, sample.encoded).scores.probabilities,
            sample.label, probability_floor);
    }
    return total / static_cast<double>(batch.size());
}

ParamVector initial_params(const ModelConfig &cfg, std::uint64_t seed) {
    Rng rng(seed);
    ParamVector params(cfg.parameter_count());
    for (double &p : params) {
        // Uniform over (-pi, pi].
        p = std::numbers::pi - rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return params;
}

Metrics evaluate(const ModelConfig &cfg, const ParamVector &params,
                 std::span<const EncodedSample> test_data) {
    Metrics m;
    m.confusion.assign(cfg.num_classes, std::vector<int>(cfg.num_classes, 0));
    const std::vector<GateApplication> circuit = build_circuit(cfg, params);
    long correct = 0;
    for (const EncodedSample &sample : test_data) {
        const auto probs =
            forward_trace(cfg, circuit, sample.encoded).scores.probabilities;
        int pred = 0;
        for (std::size_t k = 1; k < probs.size(); ++k) {
            if (probs[k] > probs[static_cast<std::size_t>(pred)]) {
                pred = static_cast<int>(k);
            }
        }
        m.confusion[static_cast<std::size_t>(sample.label)]
                   [static_cast<std::size_t>(pred)] += 1;
        if (pred == sample.label) {
            ++correct;
        }
    }
    m.final_test_accuracy =
        test_data.empty() ? 0.0
                          : static_cast<double>(correct) /
                                static_cast<double>(test_data.size());
    m.categories_learned = 0;
    for (int c = 0; c < cfg.num_classes; ++c) {
        long row = 0;
        for (int p = 0; p < cfg.num_classes; ++p) {
            row += m.confusion[c][p];
        }
        // recall >= 0.5, kept in integer arithmetic
        if (row > 0 && 2L * m.confusion[c][c] >= row) {
            ++m.categories_learned;
        }
    }
    return m;
}

TrainResult train(const TrainConfig &cfg, const ModelConfig &model_cfg,
                  std::span<const EncodedSample> train_data,
                  std::span<const EncodedSample> test_data) {
    cfg.validate();
    model_cfg.validate();
    if (train_data.empty()) {
        throw std::invalid_argument("train: empty dataset");
    }
    for (const EncodedSample &s : train_data) {
        if (s.label < 0 || s.label >= model_cfg.num_classes) {
            throw std::invalid_argument("train: label out of range");
        }
    }
    const auto start = std::chrono::steady_clock::now();

    TrainResult result;
    result.params = initial_params(model_cfg, derive_seed(cfg.seed, "params"));

    std::vector<double> adam_m(result.params.size(), 0.0);
    std::vector<double> adam_v(result.params.size(), 0.0);
    long adam_step = 0;

    const std::size_t batch_size = (cfg.batch_size == 0)
                                       ? train_data.size()
                                       : static_cast<std::size_t>(cfg.batch_size);
    std::vector<std::size_t> order(train_data.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng rng(derive_seed(cfg.seed, "shuffle/epoch" + std::to_string(epoch)));
        rng.shuffle(order);

        double loss_sum = 0.0;
        long batches = 0;
        std::vector<EncodedSample> batch;
        for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
            const std::size_t end = std::min(begin + batch_size, order.size());
            batch.clear();
            for (std::size_t i = begin; i < end; ++i) {
                batch.push_back(train_data[order[i]]);
            }
            SampleGradient g =
                batch_gradient(model_cfg, result.params, batch,
                               cfg.gradient_mode, cfg.probability_floor);
            if (!std::isfinite(g.loss)) {
                throw std::runtime_error(
                    "train: non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch " + std::to_string(batches));
            }
            loss_sum += g.loss;
            ++batches;

            for (double &grad : g.grad) {
                if (!std::isfinite(grad) || std::abs(grad) > cfg.gradient_clip) {
                    grad = std::isfinite(grad)
                               ? std::copysign(cfg.gradient_clip, grad)
                               : 0.0;
                    ++result.metrics.gradient_clip_events;
                }
            }

            ++adam_step;
            const double bc1 =
                1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam_step));
            const double bc2 =
                1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam_step));
            for (std::size_t t = 0; t < result.params.size(); ++t) {
                adam_m[t] = cfg.adam_beta1 * adam_m[t] +
                            (1.0 - cfg.adam_beta1) * g.grad[t];
                adam_v[t] = cfg.adam_beta2 * adam_v[t] +
                            (1.0 - cfg.adam_beta2) * g.grad[t] * g.grad[t];
                result.params[t] -= cfg.learning_rate * (adam_m[t] / bc1) /
                                    (std::sqrt(adam_v[t] / bc2) +
                                     cfg.adam_epsilon);
            }
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(batches);
        record.train_accuracy =
            evaluate(model_cfg, result.params, train_data).final_test_accuracy;
        const Metrics test_metrics =
            evaluate(model_cfg, result.params, test_data);
        record.test_accuracy = test_metrics.final_test_accuracy;
        record.categories_learned = test_metrics.categories_learned;
        result.metrics.epochs.push_back(record);
    }

    const Metrics final_test = evaluate(model_cfg, result.params, test_data);
    result.metrics.final_test_accuracy = final_test.final_test_accuracy;
    result.metrics.confusion = final_test.confusion;
    result.metrics.categories_learned = final_test.categories_learned;
    result.metrics.final_train_accuracy =
        evaluate(model_cfg, result.params, train_data).final_test_accuracy;
    result.metrics.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

} // namespace qconv
