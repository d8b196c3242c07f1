// Seeded property suites cross-checking the simulator against the classical
// reference path. Each suite runs a grid of geometries with fresh random
// banks and states per trial and records the worst error seen per case.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qconv {

struct CaseResult {
    std::string id;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    int trials = 0;
    int max_qubits = 0;
    std::vector<CaseResult> cases;
    double max_error = 0.0;
    bool passed = false;
    double elapsed_seconds = 0.0;
};

/// Suite names accepted by run_suite (and the CLI): theorem1, theorem2,
/// dilated, composite, unitarity, gradients.
const std::vector<std::string> &suite_names();

/// Run one named suite. trials is the per-case trial count; max_qubits caps
/// the register sizes swept (<= 12). Throws std::invalid_argument for an
/// unknown suite name.
SuiteResult run_suite(const std::string &name, int trials, std::uint64_t seed,
                      int max_qubits);

/// Per-gate single-layer equivalence: simulated post-gate amplitudes vs the
/// direct source-index formula, all positions, m in [4, max_qubits].
SuiteResult verify_single_layer(int trials, std::uint64_t seed, int max_qubits);

/// Stacked-gate equivalence: k gates vs one convolution with the composite
/// (Kronecker) kernel at the stacked output indices, complex banks.
SuiteResult verify_stacked_layers(int trials, std::uint64_t seed,
                                  int max_qubits);

/// Shifted-gate equivalence: gate at position i vs block-diagonal
/// application of kernels dilated by 2^(i-1).
SuiteResult verify_dilated(int trials, std::uint64_t seed, int max_qubits);

/// Two-gate composite kernels with real orthogonal banks, including the
/// fixed readout index lists of the 10-qubit, 4-qubit-kernel geometry.
SuiteResult verify_composite(int trials, std::uint64_t seed, int max_qubits);

/// Gram-matrix orthonormality of ansatz-built kernel banks.
SuiteResult verify_unitarity(int trials, std::uint64_t seed, int max_qubits);

/// Adjoint vs parameter-shift vs finite-difference gradients on the
/// 4-channel classifier.
SuiteResult verify_gradients(int trials, std::uint64_t seed, int max_qubits);

} // namespace qconv
