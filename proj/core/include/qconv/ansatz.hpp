// Hardware-efficient parameterized circuit used for the trainable kernel
// banks: per layer one single-qubit rotation on every qubit followed by a
// fixed CZ entangler. All rotations are generated by Paulis, so
// parameter-shift and adjoint differentiation both apply.

#pragma once

#include <functional>
#include <vector>

#include "qconv/linalg.hpp"

namespace qconv {

enum class RotationAxis { X, Y, Z };
enum class EntanglerKind { None, Line, Ring };

using ParamVector = std::vector<double>;

struct AnsatzSpec {
    int num_qubits = 4;
    int num_layers = 5;
    EntanglerKind entangler = EntanglerKind::Ring;
    /// Per-layer rotation axis; empty means Y everywhere.
    std::vector<RotationAxis> layer_axes;

    int parameter_count() const { return num_qubits * num_layers; }
    RotationAxis axis_for_layer(int layer) const;
    /// Entangled qubit pairs in application order.
    std::vector<std::pair<int, int>> entangler_pairs() const;

    void validate() const;
};

/// 2x2 rotation exp(-i theta P / 2) about the given Pauli axis. The Y
/// convention is [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]].
CMatrix rotation_matrix(RotationAxis axis, double theta);

/// Pauli matrix generating the rotation (used by the adjoint sweep).
CMatrix pauli_matrix(RotationAxis axis);

/// Dense 2^q x 2^q unitary of the full ansatz. Parameter order: layer-major,
/// params[layer * num_qubits + qubit]. Deterministic: identical inputs give
/// bitwise-identical matrices.
CMatrix build_unitary(const AnsatzSpec &spec, const ParamVector &params);

/// One elementary operation of the ansatz in application order.
struct AnsatzOp {
    enum class Kind { Rotation, ControlledZ };
    Kind kind = Kind::Rotation;
    RotationAxis axis = RotationAxis::Y;
    int qubit = 0;       // rotation target, or first CZ qubit
    int qubit2 = 0;      // second CZ qubit
    int param_index = -1; // index into the block's parameter slice
};

std::vector<AnsatzOp> elementary_ops(const AnsatzSpec &spec);

/// Two-point parameter-shift gradient of an arbitrary loss over the ansatz
/// parameters: grad[t] = (loss(theta_t + pi/2) - loss(theta_t - pi/2)) / 2.
/// Exact when the loss is an expectation value of the prepared state.
std::vector<double>
parameter_shift_grad(const AnsatzSpec &spec, const ParamVector &params,
                     const std::function<double(const ParamVector &)> &loss);

} // namespace qconv
