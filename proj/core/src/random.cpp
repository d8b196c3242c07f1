#include "qconv/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qconv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    return splitmix64(master ^ fnv1a(tag));
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    have_cached_normal_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::integer: bound must be positive");
    }
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % bound;
}

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass; plenty for the
// small (<= 16x16) matrices used as kernel banks.
void orthonormalize_rows(CMatrix &m) {
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < i; ++k) {
                cdouble proj{0.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    proj += std::conj(m(k, j)) * m(i, j);
                }
                for (std::size_t j = 0; j < n; ++j) {
                    m(i, j) -= proj * m(k, j);
                }
            }
        }
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            norm += std::norm(m(i, j));
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) {
            throw std::runtime_error("orthonormalize_rows: degenerate draw");
        }
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) /= norm;
        }
    }
}

} // namespace

CMatrix random_unitary(std::size_t dim, Rng &rng) {
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m(i, j) = cdouble{rng.normal(), rng.normal()};
        }
    }
    orthonormalize_rows(m);
    return m;
}

CMatrix random_orthogonal(std::size_t dim, Rng &rng) {
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m(i, j) = cdouble{rng.normal(), 0.0};
        }
    }
    orthonormalize_rows(m);
    return m;
}

std::vector<cdouble> random_state(int num_qubits, Rng &rng) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<cdouble> amps(dim);
    double norm = 0.0;
    for (auto &a : amps) {
        a = cdouble{rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto &a : amps) {
        a /= norm;
    }
    return amps;
}

std::vector<double> random_real_unit_vector(std::size_t len, Rng &rng) {
    std::vector<double> v(len);
    double norm = 0.0;
    for (auto &x : v) {
        x = rng.normal();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto &x : v) {
        x /= norm;
    }
    return v;
}

} // namespace qconv
