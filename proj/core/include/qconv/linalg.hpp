// Small dense matrix helpers shared by the classical reference path and the
// ansatz builder. Deliberately plain: row-major storage, O(n^3) products.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qconv {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cdouble &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const cdouble &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<const cdouble> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<const cdouble> data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

/// Dense real matrix, row-major. Used for images and real kernels.
class RealMatrix {
  public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("RealMatrix: value count mismatch");
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const double &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<const double> data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline CMatrix matmul(const CMatrix &a, const CMatrix &b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ");
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

inline std::vector<cdouble> matvec(const CMatrix &m,
                                   std::span<const cdouble> x) {
    if (m.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    std::vector<cdouble> y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cdouble acc{0.0, 0.0};
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += m(i, j) * x[j];
        }
        y[i] = acc;
    }
    return y;
}

/// Kronecker product a (x) b. Index convention: row (i_a, i_b) of the result
/// is i_a * b.rows() + i_b, so the second factor varies fastest.
inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia) {
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cdouble v = a(ia, ja);
            if (v == cdouble{0.0, 0.0}) {
                continue;
            }
            for (std::size_t ib = 0; ib < b.rows(); ++ib) {
                for (std::size_t jb = 0; jb < b.cols(); ++jb) {
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = v * b(ib, jb);
                }
            }
        }
    }
    return out;
}

inline CMatrix adjoint(const CMatrix &m) {
    CMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = std::conj(m(i, j));
        }
    }
    return out;
}

/// Max elementwise |(M†M - I)| — zero for exactly unitary matrices.
inline double unitarity_error(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        return 1.0;
    }
    const CMatrix gram = matmul(adjoint(m), m);
    double err = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            const cdouble want = (i == j) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
            err = std::max(err, std::abs(gram(i, j) - want));
        }
    }
    return err;
}

inline double max_abs_diff(std::span<const cdouble> a,
                           std::span<const cdouble> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_abs_diff: length mismatch");
    }
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        err = std::max(err, std::abs(a[i] - b[i]));
    }
    return err;
}

inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_abs_diff: length mismatch");
    }
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        err = std::max(err, std::abs(a[i] - b[i]));
    }
    return err;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("log2_exact: not a power of two");
    }
    int k = 0;
    while ((std::size_t{1} << k) < n) {
        ++k;
    }
    return k;
}

} // namespace qconv
