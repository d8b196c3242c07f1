// Full classifier circuit: amplitude-encoded data register, first-layer gate
// U, channel-tagging CNOTs into the channel register, a layer-register mark,
// channel-selective second-layer gates B, and probability readout binned
// into class scores.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qconv/ansatz.hpp"
#include "qconv/encoding.hpp"
#include "qconv/feature_map.hpp"
#include "qconv/statevector.hpp"

namespace qconv {

enum class SecondLayerMode {
    SharedB,     // one parameter block reused for every selected channel
    PerChannelB, // independent parameters per selected channel
};

struct ModelConfig {
    int data_qubits = 10;
    int kernel_qubits = 4; // n; first layer on qubits 0..n-1, second on n..2n-1
    /// Number of first-layer channel groups that receive the second layer;
    /// 0 disables everything after U (debug), and must otherwise be a power
    /// of two <= 2^channel_register_qubits.
    int channels_between_layers = 1;
    int channel_register_qubits = 1;
    int layer_register_qubits = 1;
    int num_classes = 2;
    /// Channels included in the readout aggregation (<= 2^n).
    int measured_channels = 16;
    SecondLayerMode second_layer_mode = SecondLayerMode::SharedB;
    AnsatzSpec ansatz;
    PadMode pad_mode = PadMode::Centered;

    int total_qubits() const {
        return data_qubits + channel_register_qubits + layer_register_qubits;
    }
    std::uint64_t channel_count() const {
        return std::uint64_t{1} << kernel_qubits;
    }
    /// Trainable parameter count: one ansatz block for U plus one per B.
    int parameter_count() const;
    /// Readout geometry: two stacked layers when a second layer exists.
    ConvLayout readout_layout() const;

    void validate() const;
};

/// Register sizing used by the reference experiments: 1 qubit for 1 channel,
/// log2(C) qubits for C >= 2.
int default_channel_register_qubits(int channels_between_layers);

struct ClassScores {
    std::vector<double> logits;        // feature-bin sums
    std::vector<double> probabilities; // softmax of the logits
};

/// Softmax with max subtraction; output sums to 1.
std::vector<double> softmax(std::span<const double> logits);

/// The circuit as ordered gate applications (U and B as whole blocks):
///   [U] ++ [tagging CNOTs] ++ [layer mark] ++ [controlled B per channel].
std::vector<GateApplication> build_circuit(const ModelConfig &cfg,
                                           const ParamVector &params);

/// One elementary operation with its global parameter index (-1 when fixed).
/// Shared-B circuits reference the same parameter from several ops.
struct CircuitOp {
    GateApplication gate;
    int param_index = -1;
    RotationAxis axis = RotationAxis::Y;
};

/// The same circuit decomposed into rotations/CZ/X ops for differentiation.
std::vector<CircuitOp> build_elementary_circuit(const ModelConfig &cfg,
                                                const ParamVector &params);

/// Place an encoded data-register vector (length 2^data_qubits) into the
/// full-width state with all ancilla registers in |0...0>.
StateVector prepare_input_state(const ModelConfig &cfg,
                                std::span<const double> encoded);

/// Everything forward computes, for reuse by the gradient paths.
struct ForwardTrace {
    StateVector output_state;
    std::vector<double> data_marginal; // length 2^data_qubits
    FeatureTensor features;
    ClassScores scores;
};

ForwardTrace forward_trace(const ModelConfig &cfg, const ParamVector &params,
                           std::span<const double> encoded);

/// Variant over a prebuilt circuit, for evaluating many inputs at fixed
/// parameters without rebuilding the block unitaries each time.
ForwardTrace forward_trace(const ModelConfig &cfg,
                           const std::vector<GateApplication> &circuit,
                           std::span<const double> encoded);

/// Run the circuit on an encoded input and return class scores.
ClassScores forward(const ModelConfig &cfg, const ParamVector &params,
                    std::span<const double> encoded);

/// Round-robin aggregation of features into num_bins logits, restricted to
/// the first measured_channels channels, enumerated in basis-index order.
/// bin_permutation (optional) remaps bin b to class bin_permutation[b].
std::vector<double>
aggregate_features(const FeatureTensor &features, int num_bins,
                   int measured_channels,
                   std::span<const int> bin_permutation = {});

/// Pixel matrix in [0,1] -> padded 32x32 -> patch-major vector (length
/// 2^data_qubits), ready for amplitude encoding. Requires the 10-qubit,
/// 4x4-kernel geometry.
std::vector<double> encode_image(const ModelConfig &cfg,
                                 const RealMatrix &image01);

/// argmax of forward probabilities; ties break toward the smaller class.
int predict_encoded(const ModelConfig &cfg, const ParamVector &params,
                    std::span<const double> encoded);
int predict(const ModelConfig &cfg, const ParamVector &params,
            const RealMatrix &image01);

} // namespace qconv
