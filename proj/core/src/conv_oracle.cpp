#include "qconv/conv_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qconv {

std::vector<double> Kernel::flattened() const {
    std::vector<double> w(weights.data().begin(), weights.data().end());
    return w;
}

void KernelBank::validate(double tol) const {
    if (matrix.rows() != matrix.cols() || !is_power_of_two(matrix.rows())) {
        throw std::invalid_argument("KernelBank: matrix must be square with power-of-two dimension");
    }
    if (unitarity_error(matrix) > tol) {
        throw std::invalid_argument("KernelBank: rows are not orthonormal");
    }
}

RealMatrix cross_correlate(const RealMatrix &image, const Kernel &kernel,
                           int stride) {
    if (stride < 1) {
        throw std::invalid_argument("cross_correlate: stride must be >= 1");
    }
    const int kh = static_cast<int>(kernel.weights.rows());
    const int kw = static_cast<int>(kernel.weights.cols());
    const int d = kernel.dilation;
    if (d < 1) {
        throw std::invalid_argument("cross_correlate: dilation must be >= 1");
    }
    // Extent of the receptive field once taps are spread by the dilation.
    const int span_h = (kh - 1) * d + 1;
    const int span_w = (kw - 1) * d + 1;
    const int ih = static_cast<int>(image.rows());
    const int iw = static_cast<int>(image.cols());
    if (span_h > ih || span_w > iw) {
        throw std::invalid_argument("cross_correlate: kernel larger than image");
    }
    const int oh = (ih - span_h) / stride + 1;
    const int ow = (iw - span_w) / stride + 1;
    RealMatrix out(oh, ow);
    for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
            double acc = 0.0;
            for (int u = 0; u < kh; ++u) {
                for (int v = 0; v < kw; ++v) {
                    acc += kernel.weights(u, v) *
                           image(i * stride + u * d, j * stride + v * d);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

std::vector<cdouble> block_diag_apply(const CMatrix &bank,
                                      std::span<const cdouble> x) {
    if (bank.rows() != bank.cols()) {
        throw std::invalid_argument("block_diag_apply: bank must be square");
    }
    if (bank.rows() == 0 || x.size() % bank.rows() != 0) {
        throw std::invalid_argument("block_diag_apply: input length must be a multiple of the bank dimension");
    }
    const std::size_t num_blocks = x.size() / bank.rows();
    const CMatrix full = kron(CMatrix::identity(num_blocks), bank);
    return matvec(full, x);
}

std::vector<double> block_diag_apply_real(const CMatrix &bank,
                                          std::span<const double> x) {
    std::vector<cdouble> xc(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xc[i] = cdouble{x[i], 0.0};
    }
    const std::vector<cdouble> yc = block_diag_apply(bank, xc);
    std::vector<double> y(yc.size());
    for (std::size_t i = 0; i < yc.size(); ++i) {
        y[i] = yc[i].real();
    }
    return y;
}

std::vector<double> dilate_kernel(std::span<const double> w, int slot,
                                  int n1) {
    if (n1 < 1 || !is_power_of_two(static_cast<std::size_t>(n1))) {
        throw std::invalid_argument("dilate_kernel: n1 must be a power of two");
    }
    if (slot < 0 || slot >= n1) {
        throw std::out_of_range("dilate_kernel: slot " + std::to_string(slot) +
                                " out of range for n1=" + std::to_string(n1));
    }
    std::vector<double> out(w.size() * static_cast<std::size_t>(n1), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i * n1 + slot] = w[i];
    }
    return out;
}

std::vector<double> composite_kernel(std::span<const double> w2,
                                     std::span<const double> w1) {
    std::vector<double> out(w2.size() * w1.size());
    for (std::size_t i = 0; i < w2.size(); ++i) {
        for (std::size_t j = 0; j < w1.size(); ++j) {
            out[i * w1.size() + j] = w2[i] * w1[j];
        }
    }
    return out;
}

std::vector<cdouble> composite_kernel(std::span<const cdouble> w2,
                                      std::span<const cdouble> w1) {
    std::vector<cdouble> out(w2.size() * w1.size());
    for (std::size_t i = 0; i < w2.size(); ++i) {
        for (std::size_t j = 0; j < w1.size(); ++j) {
            out[i * w1.size() + j] = w2[i] * w1[j];
        }
    }
    return out;
}

CMatrix embed_full_matrix(const GateApplication &gate, int num_qubits) {
    if (num_qubits > 12) {
        throw std::invalid_argument("embed_full_matrix: capped at 12 qubits");
    }
    gate.validate(num_qubits);

    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    const int n = gate.num_target_qubits();
    const std::uint64_t gate_dim = std::uint64_t{1} << n;

    CMatrix full(dim, dim);
    for (std::uint64_t col = 0; col < dim; ++col) {
        bool match = true;
        for (const ControlBit &c : gate.controls) {
            if (static_cast<int>((col >> c.qubit) & 1ULL) != c.value) {
                match = false;
                break;
            }
        }
        if (!match) {
            full(col, col) = 1.0; // identity column outside the control subspace
            continue;
        }
        std::uint64_t local = 0;
        std::uint64_t cleared = col;
        for (int b = 0; b < n; ++b) {
            const std::uint64_t mask = std::uint64_t{1} << gate.targets[b];
            if (col & mask) {
                local |= std::uint64_t{1} << b;
                cleared &= ~mask;
            }
        }
        for (std::uint64_t r = 0; r < gate_dim; ++r) {
            std::uint64_t row = cleared;
            for (int b = 0; b < n; ++b) {
                if ((r >> b) & 1ULL) {
                    row |= std::uint64_t{1} << gate.targets[b];
                }
            }
            full(row, col) = gate.unitary(r, local);
        }
    }
    return full;
}

} // namespace qconv
