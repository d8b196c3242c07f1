// Index algebra connecting gate placement to convolution geometry: which
// input amplitudes feed a given output feature, and at which basis state a
// feature lands after one or several stacked gates.
//
// Convention: j (feature), c (channel), l (kernel tap) and s (source
// amplitude) are 1-based as in the public accessors below; basis-state
// indices returned by the *_output_index functions are 0-based.

#pragma once

#include <cstdint>
#include <vector>

#include "qconv/conv_oracle.hpp"
#include "qconv/statevector.hpp"

namespace qconv {

/// Geometry of a gate-as-convolution placement on the data register.
struct ConvLayout {
    int gate_qubits = 0;    // n: kernel size, stride and channel count are 2^n
    int gate_position = 1;  // i, 1-based; 1 = least significant qubit
    int stacked_layers = 1; // k stacked gates (positions 1..k, each n qubits)
    int total_qubits = 0;   // m

    std::uint64_t channels() const { return std::uint64_t{1} << gate_qubits; }
    std::uint64_t kernel_size() const { return channels(); }
    std::uint64_t stride() const { return channels(); }

    /// Features per channel after one gate: 2^(m-n).
    std::uint64_t single_layer_feature_count() const {
        return std::uint64_t{1} << (total_qubits - gate_qubits);
    }
    /// Features per channel after k stacked gates: 2^(m-nk).
    std::uint64_t stacked_feature_count() const {
        return std::uint64_t{1} << (total_qubits - gate_qubits * stacked_layers);
    }

    void validate() const;
};

/// 1-based amplitude index s feeding feature j through kernel tap l:
///   s = (2^n - 1) * 2^(i-1) * floor((j-1) / 2^(i-1)) + j + (l-1) * 2^(i-1).
/// A gate at position i taps amplitudes spaced 2^(i-1) apart (dilation).
std::uint64_t source_index(const ConvLayout &layout, std::uint64_t j,
                           std::uint64_t l);

/// 0-based basis index where feature (j, c) of a single gate at position i
/// lands in the post-gate state.
std::uint64_t single_layer_output_index(const ConvLayout &layout,
                                        std::uint64_t j, std::uint64_t c);

/// 0-based basis index of feature (j, c) after k stacked gates filling
/// qubits 0..nk-1:  2^n * 2^(n(k-1)) * (j-1) + 2^(n(k-1)) * (c-1).
std::uint64_t stacked_output_index(const ConvLayout &layout, std::uint64_t j,
                                   std::uint64_t c);

/// Feature value computed directly from the *input* amplitudes, without
/// simulating the gate: sum_l bank(c,l) * amplitude[source_index(j,l) - 1].
cdouble single_layer_feature(const StateVector &input, const KernelBank &bank,
                             const ConvLayout &layout, std::uint64_t j,
                             std::uint64_t c);

enum class FeatureMode {
    Probability,   // squared magnitude at the output basis state
    RealAmplitude, // real part of the amplitude (real-valued circuits)
};

/// values[(c-1) * feature_count + (j-1)], read at stacked output indices.
struct FeatureTensor {
    ConvLayout layout;
    std::vector<double> values;

    std::uint64_t feature_count() const { return layout.stacked_feature_count(); }
    double at(std::uint64_t c, std::uint64_t j) const; // 1-based
};

FeatureTensor extract_features(const StateVector &state,
                               const ConvLayout &layout, FeatureMode mode);

/// Same readout from a precomputed probability vector over the data
/// register (e.g. a marginal when ancilla registers are present).
FeatureTensor extract_features(std::span<const double> register_probabilities,
                               const ConvLayout &layout);

} // namespace qconv
