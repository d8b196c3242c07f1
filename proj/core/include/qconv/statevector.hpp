// Dense statevector simulator. Qubit 0 is the least significant bit of the
// basis index throughout, so basis state |i> stores qubit q in bit q of i.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qconv/linalg.hpp"

namespace qconv {

/// One control condition: the gate fires only on basis states whose bit at
/// `qubit` equals `value` (0 or 1).
struct ControlBit {
    int qubit = 0;
    int value = 1;
};

/// A small unitary applied to an ordered subset of qubits, optionally under
/// control conditions. targets[0] is the least significant bit of the gate's
/// local index; control qubits must be disjoint from the targets.
struct GateApplication {
    CMatrix unitary; // 2^n x 2^n for n targets
    std::vector<int> targets;
    std::vector<ControlBit> controls;

    int num_target_qubits() const { return static_cast<int>(targets.size()); }

    /// Throws std::invalid_argument unless the matrix is unitary within
    /// 1e-10 elementwise, the dimension matches the target count, and all
    /// qubit indices are in range, distinct, and target/control disjoint.
    void validate(int total_qubits) const;
};

/// Dense complex amplitude vector of length 2^num_qubits.
class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on num_qubits qubits.
    explicit StateVector(int num_qubits);

    /// Computational basis state |index> on num_qubits qubits.
    static StateVector basis_state(int num_qubits, std::uint64_t index);

    /// Adopt an amplitude vector (must have length 2^num_qubits).
    static StateVector from_amplitudes(int num_qubits,
                                       std::vector<cdouble> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }

    cdouble &operator[](std::uint64_t i) { return amplitudes_[i]; }
    const cdouble &operator[](std::uint64_t i) const { return amplitudes_[i]; }

    std::span<const cdouble> amplitudes() const { return amplitudes_; }
    std::vector<cdouble> &mutable_amplitudes() { return amplitudes_; }

    double norm() const;

  private:
    int num_qubits_ = 0;
    std::vector<cdouble> amplitudes_;
};

/// Apply the (controlled) gate in place by stride iteration over the
/// 2^(m-n) target-aligned blocks: amplitudes at basis states whose control
/// bits mismatch are left untouched bit-for-bit. Cost O(2^m * 4^n), never
/// materializes the full 2^m x 2^m operator.
void apply_gate(StateVector &state, const GateApplication &gate);

/// Value-returning convenience wrapper around apply_gate.
StateVector applied(StateVector state, const GateApplication &gate);

/// |amplitude[i]|^2 for every basis index i.
std::vector<double> probabilities(const StateVector &state);

/// Distribution over the kept qubits: entry b sums |amplitude|^2 over all
/// basis states whose kept-qubit bits spell b (kept_qubits[0] = bit 0 of b).
std::vector<double> marginal_probabilities(const StateVector &state,
                                           std::span<const int> kept_qubits);

/// Zero every amplitude whose control bits mismatch. Used by the adjoint
/// differentiation sweep to apply projector-weighted gate generators; the
/// result is intentionally unnormalized.
void project_controls(StateVector &state, std::span<const ControlBit> controls);

namespace detail {
/// apply_gate without re-validating the gate, for inner loops over circuits
/// whose gates were validated when they were built.
void apply_gate_unchecked(StateVector &state, const GateApplication &gate);
} // namespace detail

} // namespace qconv
