#include "qconv/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qconv {

RotationAxis AnsatzSpec::axis_for_layer(int layer) const {
    if (layer_axes.empty()) {
        return RotationAxis::Y;
    }
    return layer_axes.at(static_cast<std::size_t>(layer));
}

std::vector<std::pair<int, int>> AnsatzSpec::entangler_pairs() const {
    std::vector<std::pair<int, int>> pairs;
    switch (entangler) {
    case EntanglerKind::None:
        break;
    case EntanglerKind::Line:
        for (int q = 0; q + 1 < num_qubits; ++q) {
            pairs.emplace_back(q, q + 1);
        }
        break;
    case EntanglerKind::Ring:
        if (num_qubits == 2) {
            pairs.emplace_back(0, 1); // a 2-qubit ring would double up
        } else if (num_qubits > 2) {
            for (int q = 0; q < num_qubits; ++q) {
                pairs.emplace_back(q, (q + 1) % num_qubits);
            }
        }
        break;
    }
    return pairs;
}

void AnsatzSpec::validate() const {
    if (num_qubits < 1 || num_qubits > 10) {
        throw std::invalid_argument("AnsatzSpec: num_qubits out of range");
    }
    if (num_layers < 1) {
        throw std::invalid_argument("AnsatzSpec: num_layers must be >= 1");
    }
    if (!layer_axes.empty() &&
        layer_axes.size() != static_cast<std::size_t>(num_layers)) {
        throw std::invalid_argument(
            "AnsatzSpec: layer_axes must be empty or have one entry per layer");
    }
}

CMatrix rotation_matrix(RotationAxis axis, double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("rotation_matrix: non-finite angle");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    CMatrix m(2, 2);
    switch (axis) {
    case RotationAxis::X:
        m(0, 0) = c;
        m(0, 1) = cdouble{0.0, -s};
        m(1, 0) = cdouble{0.0, -s};
        m(1, 1) = c;
        break;
    case RotationAxis::Y:
        m(0, 0) = c;
        m(0, 1) = -s;
        m(1, 0) = s;
        m(1, 1) = c;
        break;
    case RotationAxis::Z:
        m(0, 0) = std::exp(cdouble{0.0, -theta / 2.0});
        m(1, 1) = std::exp(cdouble{0.0, theta / 2.0});
        break;
    }
    return m;
}

CMatrix pauli_matrix(RotationAxis axis) {
    CMatrix m(2, 2);
    switch (axis) {
    case RotationAxis::X:
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case RotationAxis::Y:
        m(0, 1) = cdouble{0.0, -1.0};
        m(1, 0) = cdouble{0.0, 1.0};
        break;
    case RotationAxis::Z:
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        break;
    }
    return m;
}

namespace {

void check_params(const AnsatzSpec &spec, const ParamVector &params) {
    spec.validate();
    if (params.size() != static_cast<std::size_t>(spec.parameter_count())) {
        throw std::invalid_argument(
            "ansatz: expected " + std::to_string(spec.parameter_count()) +
            " parameters, got " + std::to_string(params.size()));
    }
    for (const double p : params) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("ansatz: non-finite parameter");
        }
    }
}

CMatrix cz_matrix(int num_qubits, int a, int b) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const bool both = ((i >> a) & 1ULL) && ((i >> b) & 1ULL);
        m(i, i) = both ? -1.0 : 1.0;
    }
    return m;
}

} // namespace

CMatrix build_unitary(const AnsatzSpec &spec, const ParamVector &params) {
    check_params(spec, params);
    const auto pairs = spec.entangler_pairs();
    CMatrix u = CMatrix::identity(std::size_t{1} << spec.num_qubits);
    for (int layer = 0; layer < spec.num_layers; ++layer) {
        const RotationAxis axis = spec.axis_for_layer(layer);
        // Rotation layer as a Kronecker chain, most significant qubit first.
        CMatrix rot = rotation_matrix(
            axis, params[static_cast<std::size_t>(layer) * spec.num_qubits +
                         spec.num_qubits - 1]);
        for (int q = spec.num_qubits - 2; q >= 0; --q) {
            rot = kron(rot, rotation_matrix(
                                axis, params[static_cast<std::size_t>(layer) *
                                                 spec.num_qubits +
                                             q]));
        }
        u = matmul(rot, u);
        for (const auto &[a, b] : pairs) {
            u = matmul(cz_matrix(spec.num_qubits, a, b), u);
        }
    }
    return u;
}

std::vector<AnsatzOp> elementary_ops(const AnsatzSpec &spec) {
    spec.validate();
    std::vector<AnsatzOp> ops;
    const auto pairs = spec.entangler_pairs();
    for (int layer = 0; layer < spec.num_layers; ++layer) {
        for (int q = 0; q < spec.num_qubits; ++q) {
            AnsatzOp op;
            op.kind = AnsatzOp::Kind::Rotation;
            op.axis = spec.axis_for_layer(layer);
            op.qubit = q;
            op.param_index = layer * spec.num_qubits + q;
            ops.push_back(op);
        }
        for (const auto &[a, b] : pairs) {
            AnsatzOp op;
            op.kind = AnsatzOp::Kind::ControlledZ;
            op.qubit = a;
            op.qubit2 = b;
            ops.push_back(op);
        }
    }
    return ops;
}

std::vector<double>
parameter_shift_grad(const AnsatzSpec &spec, const ParamVector &params,
                     const std::function<double(const ParamVector &)> &loss) {
    check_params(spec, params);
    constexpr double shift = std::numbers::pi / 2.0;
    std::vector<double> grad(params.size());
    ParamVector shifted = params;
    for (std::size_t t = 0; t < params.size(); ++t) {
        shifted[t] = params[t] + shift;
        const double plus = loss(shifted);
        shifted[t] = params[t] - shift;
        const double minus = loss(shifted);
        shifted[t] = params[t];
        grad[t] = 0.5 * (plus - minus);
    }
    return grad;
}

} // namespace qconv
