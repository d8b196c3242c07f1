// Classical reference implementations used as ground truth against the
// simulator: sliding-window cross-correlation, block-diagonal kernel-bank
// application, dilated and composite kernels, and full dense embedding of a
// (controlled) gate. Everything here works on explicit dense matrices and is
// intentionally independent of the stride-iteration fast path.

#pragma once

#include <span>
#include <vector>

#include "qconv/linalg.hpp"
#include "qconv/statevector.hpp"

namespace qconv {

/// A single real convolution kernel.
struct Kernel {
    RealMatrix weights; // U x V
    int dilation = 1;

    std::vector<double> flattened() const; // row-major
};

/// Square matrix whose rows act as orthonormal kernels, one per channel.
struct KernelBank {
    CMatrix matrix; // 2^n x 2^n

    std::size_t num_channels() const { return matrix.rows(); }

    /// Throws unless the matrix is unitary within tol (rows orthonormal).
    void validate(double tol = 1e-10) const;
};

/// Cross-correlation of kernel over image: out(i,j) = sum_{u,v} w(u,v) *
/// x(i*stride+u, j*stride+v), windows advanced by stride, no padding.
RealMatrix cross_correlate(const RealMatrix &image, const Kernel &kernel,
                           int stride);

/// (I_N (x) bank) * x as an explicit dense product; x length must be a
/// multiple of the bank dimension.
std::vector<cdouble> block_diag_apply(const CMatrix &bank,
                                      std::span<const cdouble> x);

/// Real convenience overload (result of the dense product is real when both
/// inputs are).
std::vector<double> block_diag_apply_real(const CMatrix &bank,
                                          std::span<const double> x);

/// Spread kernel taps by n1 slots: w (x) e_slot, where e_slot is the one-hot
/// row of length n1. Output length is w.size() * n1.
std::vector<double> dilate_kernel(std::span<const double> w, int slot, int n1);

/// Kronecker product of two kernel row vectors: w2 (x) w1.
std::vector<double> composite_kernel(std::span<const double> w2,
                                     std::span<const double> w1);
std::vector<cdouble> composite_kernel(std::span<const cdouble> w2,
                                      std::span<const cdouble> w1);

/// Build the explicit 2^m x 2^m matrix of the controlled gate embedding,
/// column by column from the bit layout. For targets (0..n-1) with no
/// controls this equals I_{2^(m-n)} (x) U. Capped at m <= 12.
CMatrix embed_full_matrix(const GateApplication &gate, int num_qubits);

} // namespace qconv
