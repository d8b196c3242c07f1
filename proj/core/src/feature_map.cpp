#include "qconv/feature_map.hpp"

#include <stdexcept>
#include <string>

namespace qconv {

void ConvLayout::validate() const {
    if (gate_qubits < 1 || total_qubits < 1) {
        throw std::invalid_argument("ConvLayout: qubit counts must be positive");
    }
    if (stacked_layers < 1) {
        throw std::invalid_argument("ConvLayout: stacked_layers must be >= 1");
    }
    if (stacked_layers == 1) {
        if (gate_position < 1 ||
            gate_position + gate_qubits - 1 > total_qubits) {
            throw std::out_of_range("ConvLayout: gate position " +
                                    std::to_string(gate_position) +
                                    " does not fit on " +
                                    std::to_string(total_qubits) + " qubits");
        }
    } else {
        if (gate_position != 1) {
            throw std::invalid_argument(
                "ConvLayout: stacked gates start at position 1");
        }
        if (gate_qubits * stacked_layers > total_qubits) {
            throw std::invalid_argument(
                "ConvLayout: stacked gates exceed the register");
        }
    }
}

std::uint64_t source_index(const ConvLayout &layout, std::uint64_t j,
                           std::uint64_t l) {
    layout.validate();
    if (j < 1 || j > layout.single_layer_feature_count()) {
        throw std::out_of_range("source_index: feature index j=" +
                                std::to_string(j) + " out of range");
    }
    if (l < 1 || l > layout.kernel_size()) {
        throw std::out_of_range("source_index: kernel tap l=" +
                                std::to_string(l) + " out of range");
    }
    const std::uint64_t tap_spacing = std::uint64_t{1}
                                      << (layout.gate_position - 1);
    const std::uint64_t block = (j - 1) / tap_spacing;
    return (layout.kernel_size() - 1) * tap_spacing * block + j +
           (l - 1) * tap_spacing;
}

std::uint64_t single_layer_output_index(const ConvLayout &layout,
                                        std::uint64_t j, std::uint64_t c) {
    layout.validate();
    if (j < 1 || j > layout.single_layer_feature_count()) {
        throw std::out_of_range("single_layer_output_index: j out of range");
    }
    if (c < 1 || c > layout.channels()) {
        throw std::out_of_range("single_layer_output_index: c out of range");
    }
    // Decompose the 0-based feature index into the bits below and above the
    // gate's target span; the channel occupies the target bits themselves.
    const int i = layout.gate_position;
    const std::uint64_t low_mask = (std::uint64_t{1} << (i - 1)) - 1;
    const std::uint64_t low = (j - 1) & low_mask;
    const std::uint64_t high = (j - 1) >> (i - 1);
    return low | ((c - 1) << (i - 1)) |
           (high << (i - 1 + layout.gate_qubits));
}

std::uint64_t stacked_output_index(const ConvLayout &layout, std::uint64_t j,
                                   std::uint64_t c) {
    layout.validate();
    if (j < 1 || j > layout.stacked_feature_count()) {
        throw std::out_of_range("stacked_output_index: j out of range");
    }
    if (c < 1 || c > layout.channels()) {
        throw std::out_of_range("stacked_output_index: c out of range");
    }
    const int n = layout.gate_qubits;
    const int k = layout.stacked_layers;
    const std::uint64_t inner = std::uint64_t{1} << (n * (k - 1));
    return (std::uint64_t{1} << n) * inner * (j - 1) + inner * (c - 1);
}

cdouble single_layer_feature(const StateVector &input, const KernelBank &bank,
                             const ConvLayout &layout, std::uint64_t j,
                             std::uint64_t c) {
    if (layout.stacked_layers != 1) {
        throw std::invalid_argument("single_layer_feature: layout must have k=1");
    }
    if (input.num_qubits() != layout.total_qubits) {
        throw std::invalid_argument("single_layer_feature: state size mismatch");
    }
    if (bank.num_channels() != layout.channels()) {
        throw std::invalid_argument("single_layer_feature: bank size mismatch");
    }
    if (c < 1 || c > layout.channels()) {
        throw std::out_of_range("single_layer_feature: c out of range");
    }
    cdouble acc{0.0, 0.0};
    for (std::uint64_t l = 1; l <= layout.kernel_size(); ++l) {
        const std::uint64_t s = source_index(layout, j, l);
        acc += bank.matrix(c - 1, l - 1) * input[s - 1];
    }
    return acc;
}

double FeatureTensor::at(std::uint64_t c, std::uint64_t j) const {
    if (c < 1 || c > layout.channels() || j < 1 || j > feature_count()) {
        throw std::out_of_range("FeatureTensor::at: index out of range");
    }
    return values[(c - 1) * feature_count() + (j - 1)];
}

namespace {

FeatureTensor extract_impl(const ConvLayout &layout, auto &&value_at) {
    layout.validate();
    FeatureTensor out;
    out.layout = layout;
    out.values.resize(layout.channels() * layout.stacked_feature_count());
    for (std::uint64_t c = 1; c <= layout.channels(); ++c) {
        for (std::uint64_t j = 1; j <= layout.stacked_feature_count(); ++j) {
            const std::uint64_t idx = stacked_output_index(layout, j, c);
            out.values[(c - 1) * layout.stacked_feature_count() + (j - 1)] =
                value_at(idx);
        }
    }
    return out;
}

} // namespace

FeatureTensor extract_features(const StateVector &state,
                               const ConvLayout &layout, FeatureMode mode) {
    if (state.num_qubits() != layout.total_qubits) {
        throw std::invalid_argument("extract_features: state size mismatch");
    }
    return extract_impl(layout, [&](std::uint64_t idx) {
        return mode == FeatureMode::Probability ? std::norm(state[idx])
                                                : state[idx].real();
    });
}

FeatureTensor extract_features(std::span<const double> register_probabilities,
                               const ConvLayout &layout) {
    if (register_probabilities.size() !=
        (std::uint64_t{1} << layout.total_qubits)) {
        throw std::invalid_argument("extract_features: probability vector size mismatch");
    }
    return extract_impl(
        layout, [&](std::uint64_t idx) { return register_probabilities[idx]; });
}

} // namespace qconv
