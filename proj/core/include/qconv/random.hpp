// Seeded randomness with fully specified algorithms so that identical seeds
// reproduce identical streams across standard-library versions. All sampling
// (uniform, normal, shuffle) is implemented here rather than via the
// implementation-defined std::*_distribution classes.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qconv/linalg.hpp"

namespace qconv {

/// Derive a named sub-seed from a master seed (splittable-PRNG style).
/// Mixes an FNV-1a hash of the tag into the master seed through SplitMix64.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (deterministic given the seed).
    double normal();
    /// Uniform integer in [0, bound).
    std::uint64_t integer(std::uint64_t bound);

    template <typename T> void shuffle(std::vector<T> &values) {
        // Fisher-Yates, spelled out so the permutation is seed-stable.
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(integer(i));
            std::swap(values[i - 1], values[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

/// Haar-like random unitary of dimension dim: complex Gaussian matrix
/// orthonormalized by modified Gram-Schmidt (re-orthogonalized once).
CMatrix random_unitary(std::size_t dim, Rng &rng);

/// Random real orthogonal matrix of dimension dim.
CMatrix random_orthogonal(std::size_t dim, Rng &rng);

/// Random normalized complex state of num_qubits qubits.
std::vector<cdouble> random_state(int num_qubits, Rng &rng);

/// Random normalized real vector of the given length (no zero vectors).
std::vector<double> random_real_unit_vector(std::size_t len, Rng &rng);

} // namespace qconv
