#include "qconv/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qconv {

void GateApplication::validate(int total_qubits) const {
    const std::size_t n = targets.size();
    if (n == 0) {
        throw std::invalid_argument("GateApplication: no target qubits");
    }
    const std::size_t dim = std::size_t{1} << n;
    if (unitary.rows() != dim || unitary.cols() != dim) {
        throw std::invalid_argument(
            "GateApplication: matrix is " + std::to_string(unitary.rows()) +
            "x" + std::to_string(unitary.cols()) + ", expected " +
            std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (unitarity_error(unitary) > 1e-10) {
        throw std::invalid_argument("GateApplication: matrix is not unitary");
    }
    std::vector<int> seen;
    for (const int t : targets) {
        if (t < 0 || t >= total_qubits) {
            throw std::out_of_range("GateApplication: target qubit " +
                                    std::to_string(t) + " out of range");
        }
        if (std::find(seen.begin(), seen.end(), t) != seen.end()) {
            throw std::invalid_argument("GateApplication: duplicate target");
        }
        seen.push_back(t);
    }
    for (const ControlBit &c : controls) {
        if (c.qubit < 0 || c.qubit >= total_qubits) {
            throw std::out_of_range("GateApplication: control qubit " +
                                    std::to_string(c.qubit) + " out of range");
        }
        if (c.value != 0 && c.value != 1) {
            throw std::invalid_argument("GateApplication: control value must be 0 or 1");
        }
        if (std::find(seen.begin(), seen.end(), c.qubit) != seen.end()) {
            throw std::invalid_argument(
                "GateApplication: control qubit overlaps a target or another control");
        }
        seen.push_back(c.qubit);
    }
}

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits),
      amplitudes_(std::uint64_t{1} << num_qubits, cdouble{0.0, 0.0}) {
    if (num_qubits < 0 || num_qubits > 30) {
        throw std::invalid_argument("StateVector: unsupported qubit count");
    }
    amplitudes_[0] = cdouble{1.0, 0.0};
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) {
        throw std::out_of_range("basis_state: index " + std::to_string(index) +
                                " out of range for " +
                                std::to_string(num_qubits) + " qubits");
    }
    s.amplitudes_[0] = cdouble{0.0, 0.0};
    s.amplitudes_[index] = cdouble{1.0, 0.0};
    return s;
}

StateVector StateVector::from_amplitudes(int num_qubits,
                                         std::vector<cdouble> amplitudes) {
    StateVector s(num_qubits);
    if (amplitudes.size() != s.dim()) {
        throw std::invalid_argument("from_amplitudes: length mismatch");
    }
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const cdouble &a : amplitudes_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

namespace {

/// Expand a (m-n)-bit outer index into a full basis index with zeros at the
/// given (ascending) bit positions.
std::uint64_t insert_zero_bits(std::uint64_t outer,
                               std::span<const int> sorted_positions) {
    std::uint64_t idx = outer;
    for (const int p : sorted_positions) {
        const std::uint64_t low = idx & ((std::uint64_t{1} << p) - 1);
        idx = ((idx >> p) << (p + 1)) | low;
    }
    return idx;
}

bool controls_match(std::uint64_t idx, std::span<const ControlBit> controls) {
    for (const ControlBit &c : controls) {
        if (static_cast<int>((idx >> c.qubit) & 1ULL) != c.value) {
            return false;
        }
    }
    return true;
}

} // namespace

void apply_gate(StateVector &state, const GateApplication &gate) {
    gate.validate(state.num_qubits());
    detail::apply_gate_unchecked(state, gate);
}

void detail::apply_gate_unchecked(StateVector &state,
                                  const GateApplication &gate) {
    const int m = state.num_qubits();
    const int n = gate.num_target_qubits();
    const std::uint64_t gate_dim = std::uint64_t{1} << n;

    std::vector<int> sorted_targets(gate.targets);
    std::sort(sorted_targets.begin(), sorted_targets.end());

    // scatter[l] = OR of target bit masks selected by the local index l,
    // honoring the declared target order (targets[0] = local bit 0).
    std::vector<std::uint64_t> scatter(gate_dim, 0);
    for (std::uint64_t l = 0; l < gate_dim; ++l) {
        for (int b = 0; b < n; ++b) {
            if ((l >> b) & 1ULL) {
                scatter[l] |= std::uint64_t{1} << gate.targets[b];
            }
        }
    }

    // Control conditions expressed in the compressed outer-index space, so
    // mismatched blocks cost one mask compare instead of a full expansion.
    std::uint64_t ctrl_mask = 0;
    std::uint64_t ctrl_want = 0;
    for (const ControlBit &c : gate.controls) {
        int below = 0;
        for (const int t : sorted_targets) {
            if (t < c.qubit) {
                ++below;
            }
        }
        ctrl_mask |= std::uint64_t{1} << (c.qubit - below);
        ctrl_want |= std::uint64_t{static_cast<std::uint64_t>(c.value)}
                     << (c.qubit - below);
    }

    auto &amps = state.mutable_amplitudes();
    std::vector<cdouble> in(gate_dim);
    std::vector<cdouble> out(gate_dim);

    const std::uint64_t num_blocks = std::uint64_t{1} << (m - n);
    for (std::uint64_t outer = 0; outer < num_blocks; ++outer) {
        if ((outer & ctrl_mask) != ctrl_want) {
            continue;
        }
        const std::uint64_t base = insert_zero_bits(outer, sorted_targets);
        for (std::uint64_t l = 0; l < gate_dim; ++l) {
            in[l] = amps[base | scatter[l]];
        }
        for (std::uint64_t r = 0; r < gate_dim; ++r) {
            cdouble acc{0.0, 0.0};
            for (std::uint64_t l = 0; l < gate_dim; ++l) {
                acc += gate.unitary(r, l) * in[l];
            }
            out[r] = acc;
        }
        for (std::uint64_t r = 0; r < gate_dim; ++r) {
            amps[base | scatter[r]] = out[r];
        }
    }
}

StateVector applied(StateVector state, const GateApplication &gate) {
    apply_gate(state, gate);
    return state;
}

std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> p(state.dim());
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        p[i] = std::norm(state[i]);
    }
    return p;
}

std::vector<double> marginal_probabilities(const StateVector &state,
                                           std::span<const int> kept_qubits) {
    std::vector<bool> seen(state.num_qubits(), false);
    for (const int q : kept_qubits) {
        if (q < 0 || q >= state.num_qubits()) {
            throw std::out_of_range("marginal_probabilities: qubit " +
                                    std::to_string(q) + " out of range");
        }
        if (seen[q]) {
            throw std::invalid_argument("marginal_probabilities: duplicate qubit");
        }
        seen[q] = true;
    }
    std::vector<double> p(std::uint64_t{1} << kept_qubits.size(), 0.0);
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        std::uint64_t b = 0;
        for (std::size_t k = 0; k < kept_qubits.size(); ++k) {
            b |= ((i >> kept_qubits[k]) & 1ULL) << k;
        }
        p[b] += std::norm(state[i]);
    }
    return p;
}

void project_controls(StateVector &state, std::span<const ControlBit> controls) {
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (!controls_match(i, controls)) {
            state[i] = cdouble{0.0, 0.0};
        }
    }
}

} // namespace qconv
