#include "qconv/qcnn_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qconv {

int default_channel_register_qubits(int channels_between_layers) {
    if (channels_between_layers <= 0) {
        return 0;
    }
    if (channels_between_layers == 1) {
        return 1;
    }
    return log2_exact(static_cast<std::size_t>(channels_between_layers));
}

int ModelConfig::parameter_count() const {
    const int block = ansatz.parameter_count();
    if (channels_between_layers == 0) {
        return block;
    }
    const int b_blocks =
        (second_layer_mode == SecondLayerMode::SharedB) ? 1 : channels_between_layers;
    return block * (1 + b_blocks);
}

ConvLayout ModelConfig::readout_layout() const {
    ConvLayout layout;
    layout.gate_qubits = kernel_qubits;
    layout.gate_position = 1;
    layout.stacked_layers = (channels_between_layers >= 1) ? 2 : 1;
    layout.total_qubits = data_qubits;
    return layout;
}

void ModelConfig::validate() const {
    ansatz.validate();
    if (data_qubits < 1 || data_qubits > 20) {
        throw std::invalid_argument("ModelConfig: data_qubits out of range");
    }
    if (kernel_qubits < 1 || kernel_qubits > data_qubits) {
        throw std::invalid_argument("ModelConfig: kernel_qubits out of range");
    }
    if (ansatz.num_qubits != kernel_qubits) {
        throw std::invalid_argument(
            "ModelConfig: ansatz qubit count must equal kernel_qubits");
    }
    const int c = channels_between_layers;
    if (c < 0 || static_cast<std::uint64_t>(c) > channel_count()) {
        throw std::invalid_argument(
            "ModelConfig: channels_between_layers out of range");
    }
    if (c > 0 && !is_power_of_two(static_cast<std::size_t>(c))) {
        throw std::invalid_argument(
            "ModelConfig: channels_between_layers must be 0 or a power of two "
            "(the selected set must be expressible as one controlled gate)");
    }
    if (c >= 1) {
        if (2 * kernel_qubits > data_qubits) {
            throw std::invalid_argument(
                "ModelConfig: second layer needs 2 * kernel_qubits data qubits");
        }
        if (channel_register_qubits < 1 || layer_register_qubits != 1) {
            throw std::invalid_argument(
                "ModelConfig: a second layer needs a channel register and one "
                "layer qubit");
        }
        if ((std::uint64_t{1} << channel_register_qubits) <
            static_cast<std::uint64_t>(c)) {
            throw std::invalid_argument(
                "ModelConfig: channel register too small for the selected channels");
        }
        if (channel_register_qubits > kernel_qubits) {
            throw std::invalid_argument(
                "ModelConfig: channel register wider than the channel index");
        }
    } else {
        if (channel_register_qubits != 0 || layer_register_qubits != 0) {
            throw std::invalid_argument(
                "ModelConfig: debug mode (C=0) runs without ancilla registers");
        }
    }
    if (measured_channels < 1 ||
        static_cast<std::uint64_t>(measured_channels) > channel_count()) {
        throw std::invalid_argument("ModelConfig: measured_channels out of range");
    }
    const ConvLayout layout = readout_layout();
    layout.validate();
    const std::uint64_t usable =
        layout.stacked_feature_count() * static_cast<std::uint64_t>(measured_channels);
    if (num_classes < 2 || static_cast<std::uint64_t>(num_classes) > usable) {
        throw std::invalid_argument(
            "ModelConfig: num_classes must be in [2, measured feature count]");
    }
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax: empty input");
    }
    const double zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - zmax);
        total += p[i];
    }
    for (double &v : p) {
        v /= total;
    }
    return p;
}

namespace {

CMatrix pauli_x_matrix() {
    CMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    return x;
}

/// Control bits forced by selecting channel groups {0..C-1}: for C = 2^a
/// the register bits a..reg_qubits-1 must read 0; the low a bits are free.
std::vector<ControlBit> mark_controls(const ModelConfig &cfg) {
    std::vector<ControlBit> controls;
    const int free_bits =
        log2_exact(static_cast<std::size_t>(cfg.channels_between_layers));
    for (int b = free_bits; b < cfg.channel_register_qubits; ++b) {
        controls.push_back({cfg.data_qubits + b, 0});
    }
    return controls;
}

/// Controls selecting channel group c: the full register spells c, and the
/// layer mark must be set.
std::vector<ControlBit> channel_controls(const ModelConfig &cfg, int c) {
    std::vector<ControlBit> controls;
    for (int b = 0; b < cfg.channel_register_qubits; ++b) {
        controls.push_back({cfg.data_qubits + b, (c >> b) & 1});
    }
    controls.push_back({cfg.data_qubits + cfg.channel_register_qubits, 1});
    return controls;
}

std::span<const double> b_params(const ModelConfig &cfg,
                                 const ParamVector &params, int c) {
    const int block = cfg.ansatz.parameter_count();
    const int offset = (cfg.second_layer_mode == SecondLayerMode::SharedB)
                           ? block
                           : block * (1 + c);
    return {params.data() + offset, static_cast<std::size_t>(block)};
}

void check_param_count(const ModelConfig &cfg, const ParamVector &params) {
    if (params.size() != static_cast<std::size_t>(cfg.parameter_count())) {
        throw std::invalid_argument(
            "model: expected " + std::to_string(cfg.parameter_count()) +
            " parameters, got " + std::to_string(params.size()));
    }
}

} // namespace

std::vector<GateApplication> build_circuit(const ModelConfig &cfg,
                                           const ParamVector &params) {
    cfg.validate();
    check_param_count(cfg, params);
    const int block = cfg.ansatz.parameter_count();

    std::vector<GateApplication> circuit;
    GateApplication u;
    u.unitary = build_unitary(
        cfg.ansatz, ParamVector(params.begin(), params.begin() + block));
    u.targets.resize(cfg.kernel_qubits);
    for (int q = 0; q < cfg.kernel_qubits; ++q) {
        u.targets[q] = q;
    }
    u.validate(cfg.total_qubits());
    circuit.push_back(std::move(u));

    if (cfg.channels_between_layers == 0) {
        return circuit;
    }

    for (int b = 0; b < cfg.channel_register_qubits; ++b) {
        GateApplication tag;
        tag.unitary = pauli_x_matrix();
        tag.targets = {cfg.data_qubits + b};
        tag.controls = {{b, 1}};
        tag.validate(cfg.total_qubits());
        circuit.push_back(std::move(tag));
    }

    GateApplication mark;
    mark.unitary = pauli_x_matrix();
    mark.targets = {cfg.data_qubits + cfg.channel_register_qubits};
    mark.controls = mark_controls(cfg);
    mark.validate(cfg.total_qubits());
    circuit.push_back(std::move(mark));

    for (int c = 0; c < cfg.channels_between_layers; ++c) {
        GateApplication bgate;
        const auto slice = b_params(cfg, params, c);
        bgate.unitary = build_unitary(
            cfg.ansatz, ParamVector(slice.begin(), slice.end()));
        bgate.targets.resize(cfg.kernel_qubits);
        for (int q = 0; q < cfg.kernel_qubits; ++q) {
            bgate.targets[q] = cfg.kernel_qubits + q;
        }
        bgate.controls = channel_controls(cfg, c);
        bgate.validate(cfg.total_qubits());
        circuit.push_back(std::move(bgate));
    }
    return circuit;
}

namespace {

void append_block_ops(std::vector<CircuitOp> &out, const ModelConfig &cfg,
                      const ParamVector &params, int qubit_offset,
                      int param_offset, const std::vector<ControlBit> &controls) {
    for (const AnsatzOp &op : elementary_ops(cfg.ansatz)) {
        CircuitOp cop;
        if (op.kind == AnsatzOp::Kind::Rotation) {
            cop.param_index = param_offset + op.param_index;
            cop.axis = op.axis;
            cop.gate.unitary = rotation_matrix(
                op.axis, params[static_cast<std::size_t>(cop.param_index)]);
            cop.gate.targets = {qubit_offset + op.qubit};
        } else {
            CMatrix cz(2, 2);
            cz(0, 0) = 1.0;
            cz(1, 1) = -1.0; // Z on qubit2, controlled on qubit1
            cop.gate.unitary = cz;
            cop.gate.targets = {qubit_offset + op.qubit2};
            cop.gate.controls = {{qubit_offset + op.qubit, 1}};
        }
        cop.gate.controls.insert(cop.gate.controls.end(), controls.begin(),
                                 controls.end());
        out.push_back(std::move(cop));
    }
}

} // namespace

std::vector<CircuitOp> build_elementary_circuit(const ModelConfig &cfg,
                                                const ParamVector &params) {
    cfg.validate();
    check_param_count(cfg, params);
    const int block = cfg.ansatz.parameter_count();

    std::vector<CircuitOp> ops;
    append_block_ops(ops, cfg, params, 0, 0, {});

    if (cfg.channels_between_layers == 0) {
        return ops;
    }

    for (int b = 0; b < cfg.channel_register_qubits; ++b) {
        CircuitOp tag;
        tag.gate.unitary = pauli_x_matrix();
        tag.gate.targets = {cfg.data_qubits + b};
        tag.gate.controls = {{b, 1}};
        ops.push_back(std::move(tag));
    }

    CircuitOp mark;
    mark.gate.unitary = pauli_x_matrix();
    mark.gate.targets = {cfg.data_qubits + cfg.channel_register_qubits};
    mark.gate.controls = mark_controls(cfg);
    ops.push_back(std::move(mark));

    for (int c = 0; c < cfg.channels_between_layers; ++c) {
        const int offset = (cfg.second_layer_mode == SecondLayerMode::SharedB)
                               ? block
                               : block * (1 + c);
        append_block_ops(ops, cfg, params, cfg.kernel_qubits, offset,
                         channel_controls(cfg, c));
    }
    return ops;
}

StateVector prepare_input_state(const ModelConfig &cfg,
                                std::span<const double> encoded) {
    cfg.validate();
    const std::uint64_t data_dim = std::uint64_t{1} << cfg.data_qubits;
    if (encoded.size() != data_dim) {
        throw std::invalid_argument("prepare_input_state: encoded length mismatch");
    }
    double norm = 0.0;
    for (const double v : encoded) {
        norm += v * v;
    }
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("prepare_input_state: input not normalized");
    }
    StateVector state(cfg.total_qubits());
    state[0] = cdouble{0.0, 0.0};
    // Ancilla registers start in |0...0>, so the encoded amplitudes occupy
    // the low 2^data_qubits basis states.
    for (std::uint64_t i = 0; i < data_dim; ++i) {
        state[i] = cdouble{encoded[i], 0.0};
    }
    return state;
}

std::vector<double>
aggregate_features(const FeatureTensor &features, int num_bins,
                   int measured_channels, std::span<const int> bin_permutation) {
    if (num_bins < 1) {
        throw std::invalid_argument("aggregate_features: num_bins must be >= 1");
    }
    if (measured_channels < 1 ||
        static_cast<std::uint64_t>(measured_channels) >
            features.layout.channels()) {
        throw std::invalid_argument("aggregate_features: measured_channels out of range");
    }
    if (!bin_permutation.empty() &&
        bin_permutation.size() != static_cast<std::size_t>(num_bins)) {
        throw std::invalid_argument("aggregate_features: permutation size mismatch");
    }
    std::vector<double> logits(num_bins, 0.0);
    std::uint64_t t = 0;
    // Basis-index order: the feature index j strides 2^(nk), the channel c
    // strides 2^(n(k-1)), so enumerating j-major with c ascending inside
    // walks the output basis states in increasing order.
    for (std::uint64_t j = 1; j <= features.feature_count(); ++j) {
        for (std::uint64_t c = 1;
             c <= static_cast<std::uint64_t>(measured_channels); ++c, ++t) {
            int bin = static_cast<int>(t % num_bins);
            if (!bin_permutation.empty()) {
                bin = bin_permutation[bin];
            }
            logits[bin] += features.at(c, j);
        }
    }
    return logits;
}

ForwardTrace forward_trace(const ModelConfig &cfg,
                           const std::vector<GateApplication> &circuit,
                           std::span<const double> encoded) {
    ForwardTrace trace;
    trace.output_state = prepare_input_state(cfg, encoded);
    for (const GateApplication &gate : circuit) {
        detail::apply_gate_unchecked(trace.output_state, gate);
    }
    std::vector<int> data_qubits(cfg.data_qubits);
    for (int q = 0; q < cfg.data_qubits; ++q) {
        data_qubits[q] = q;
    }
    trace.data_marginal =
        marginal_probabilities(trace.output_state, data_qubits);
    trace.features = extract_features(trace.data_marginal, cfg.readout_layout());
    trace.scores.logits = aggregate_features(trace.features, cfg.num_classes,
                                             cfg.measured_channels);
    trace.scores.probabilities = softmax(trace.scores.logits);
    return trace;
}

ForwardTrace forward_trace(const ModelConfig &cfg, const ParamVector &params,
                           std::span<const double> encoded) {
    return forward_trace(cfg, build_circuit(cfg, params), encoded);
}

ClassScores forward(const ModelConfig &cfg, const ParamVector &params,
                    std::span<const double> encoded) {
    return forward_trace(cfg, params, encoded).scores;
}

std::vector<double> encode_image(const ModelConfig &cfg,
                                 const RealMatrix &image01) {
    if (cfg.data_qubits != 10 || cfg.kernel_qubits != 4) {
        throw std::invalid_argument(
            "encode_image: image pipeline requires 10 data qubits and a 4x4 kernel");
    }
    const RealMatrix padded = pad_image(image01, cfg.pad_mode);
    const PatchEncoding enc{32, 32, 4, 4};
    std::vector<double> vec = patch_flatten(padded, enc);
    double norm = 0.0;
    for (const double v : vec) {
        norm += v * v;
    }
    if (norm == 0.0) {
        throw std::invalid_argument("encode_image: all-zero image");
    }
    norm = std::sqrt(norm);
    for (double &v : vec) {
        v /= norm;
    }
    return vec;
}

int predict_encoded(const ModelConfig &cfg, const ParamVector &params,
                    std::span<const double> encoded) {
    const ClassScores scores = forward(cfg, params, encoded);
    int best = 0;
    for (std::size_t k = 1; k < scores.probabilities.size(); ++k) {
        if (scores.probabilities[k] > scores.probabilities[best]) {
            best = static_cast<int>(k);
        }
    }
    return best;
}

int predict(const ModelConfig &cfg, const ParamVector &params,
            const RealMatrix &image01) {
    return predict_encoded(cfg, params, encode_image(cfg, image01));
}

} // namespace qconv
