#include "qconv/verify.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qconv/conv_oracle.hpp"
#include "qconv/feature_map.hpp"
#include "qconv/qcnn_model.hpp"
#include "qconv/random.hpp"
#include "qconv/statevector.hpp"
#include "qconv/trainer.hpp"

namespace qconv {

namespace {

constexpr double kTolerance = 1e-10;

class SuiteTimer {
  public:
    explicit SuiteTimer(SuiteResult &result)
        : result_(result), start_(std::chrono::steady_clock::now()) {}
    ~SuiteTimer() {
        result_.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start_)
                .count();
        result_.max_error = 0.0;
        result_.passed = true;
        for (const CaseResult &c : result_.cases) {
            result_.max_error = std::max(result_.max_error, c.max_error);
            result_.passed = result_.passed && c.passed;
        }
    }

  private:
    SuiteResult &result_;
    std::chrono::steady_clock::time_point start_;
};

SuiteResult make_suite(std::string name, std::uint64_t seed, int trials,
                       int max_qubits) {
    SuiteResult suite;
    suite.name = std::move(name);
    suite.seed = seed;
    suite.trials = trials;
    suite.max_qubits = max_qubits;
    return suite;
}

void finish_case(SuiteResult &suite, std::string id, double max_error,
                 double tolerance) {
    suite.cases.push_back(
        {std::move(id), max_error, tolerance, max_error <= tolerance});
}

GateApplication bank_gate(const CMatrix &bank, int first_target) {
    GateApplication gate;
    gate.unitary = bank;
    const int n = log2_exact(bank.rows());
    gate.targets.resize(n);
    for (int q = 0; q < n; ++q) {
        gate.targets[q] = first_target + q;
    }
    return gate;
}

} // namespace

SuiteResult verify_single_layer(int trials, std::uint64_t seed,
                                int max_qubits) {
    SuiteResult suite = make_suite("theorem1", seed, trials, max_qubits);
    SuiteTimer timer(suite);
    for (int m = 4; m <= max_qubits; ++m) {
        for (int n = 1; n <= 4 && n <= m; ++n) {
            for (int i = 1; i + n - 1 <= m; ++i) {
                Rng rng(derive_seed(seed, "theorem1/m" + std::to_string(m) +
                                              "n" + std::to_string(n) + "i" +
                                              std::to_string(i)));
                const ConvLayout layout{n, i, 1, m};
                double max_error = 0.0;
                for (int trial = 0; trial < trials; ++trial) {
                    const KernelBank bank{random_unitary(std::size_t{1} << n, rng)};
                    const StateVector input =
                        StateVector::from_amplitudes(m, random_state(m, rng));
                    const StateVector output =
                        applied(input, bank_gate(bank.matrix, i - 1));
                    for (std::uint64_t j = 1;
                         j <= layout.single_layer_feature_count(); ++j) {
                        for (std::uint64_t c = 1; c <= layout.channels(); ++c) {
                            const cdouble predicted =
                                single_layer_feature(input, bank, layout, j, c);
                            const cdouble simulated =
                                output[single_layer_output_index(layout, j, c)];
                            max_error = std::max(max_error,
                                                 std::abs(predicted - simulated));
                        }
                    }
                }
                finish_case(suite,
                            "m=" + std::to_string(m) + ",n=" + std::to_string(n) +
                                ",i=" + std::to_string(i),
                            max_error, kTolerance);
            }
        }
    }
    return suite;
}

SuiteResult verify_stacked_layers(int trials, std::uint64_t seed,
                                  int max_qubits) {
    SuiteResult suite = make_suite("theorem2", seed, trials, max_qubits);
    SuiteTimer timer(suite);

    // Fixed readout positions of the 10-qubit, 4-qubit-kernel geometry.
    {
        const ConvLayout layout{4, 1, 2, 10};
        double err = 0.0;
        for (std::uint64_t c = 1; c <= 16; ++c) {
            err = std::max(err,
                           std::abs(static_cast<double>(
                                        stacked_output_index(layout, 1, c)) -
                                    static_cast<double>(16 * (c - 1))));
            err = std::max(err,
                           std::abs(static_cast<double>(
                                        stacked_output_index(layout, 2, c)) -
                                    static_cast<double>(256 + 16 * (c - 1))));
        }
        finish_case(suite, "index-lists,n=4,k=2,m=10", err, 0.0);
    }

    const std::vector<std::pair<int, int>> shapes = {
        {1, 2}, {1, 3}, {2, 2}, {2, 3}, {4, 2}};
    for (const auto &[n, k] : shapes) {
        const int m = std::min(n * k + 2, max_qubits);
        if (n * k > m) {
            continue;
        }
        Rng rng(derive_seed(seed, "theorem2/n" + std::to_string(n) + "k" +
                                      std::to_string(k)));
        const ConvLayout layout{n, 1, k, m};
        double max_error = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<CMatrix> banks;
            for (int t = 0; t < k; ++t) {
                banks.push_back(random_unitary(std::size_t{1} << n, rng));
            }
            const std::vector<cdouble> amps = random_state(m, rng);
            StateVector state = StateVector::from_amplitudes(m, amps);
            for (int t = 0; t < k; ++t) {
                apply_gate(state, bank_gate(banks[t], t * n));
            }
            const std::uint64_t block_len = std::uint64_t{1} << (n * k);
            for (std::uint64_t c = 1; c <= layout.channels(); ++c) {
                // Composite kernel: row c of the last gate, row 1 of all
                // earlier gates, Kronecker-chained last-to-first.
                std::vector<cdouble> kernel(banks[k - 1].row(c - 1).begin(),
                                            banks[k - 1].row(c - 1).end());
                for (int t = k - 2; t >= 0; --t) {
                    kernel = composite_kernel(kernel, banks[t].row(0));
                }
                for (std::uint64_t j = 1; j <= layout.stacked_feature_count();
                     ++j) {
                    cdouble expected{0.0, 0.0};
                    for (std::uint64_t l = 0; l < block_len; ++l) {
                        expected += kernel[l] * amps[(j - 1) * block_len + l];
                    }
                    const cdouble simulated =
                        state[stacked_output_index(layout, j, c)];
                    max_error =
                        std::max(max_error, std::abs(expected - simulated));
                }
            }
        }
        finish_case(suite,
                    "n=" + std::to_string(n) + ",k=" + std::to_string(k) +
                        ",m=" + std::to_string(m),
                    max_error, kTolerance);
    }
    return suite;
}

SuiteResult verify_dilated(int trials, std::uint64_t seed, int max_qubits) {
    SuiteResult suite = make_suite("dilated", seed, trials, max_qubits);
    SuiteTimer timer(suite);
    const int n = 2;
    const int m = std::min(8, max_qubits);
    for (int i = 1; i <= 3; ++i) {
        Rng rng(derive_seed(seed, "dilated/i" + std::to_string(i)));
        const int n1 = 1 << (i - 1);
        double max_error = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            const CMatrix bank = random_orthogonal(std::size_t{1} << n, rng);
            const std::vector<double> x =
                random_real_unit_vector(std::size_t{1} << m, rng);

            // Assemble the dilated bank row-by-row from dilate_kernel; this
            // equals bank (x) I_{n1} and realizes tap spacing 2^(i-1).
            const std::size_t dim = (std::size_t{1} << n) * n1;
            CMatrix dilated(dim, dim);
            for (std::size_t u = 0; u < bank.rows(); ++u) {
                std::vector<double> w(bank.cols());
                for (std::size_t l = 0; l < bank.cols(); ++l) {
                    w[l] = bank(u, l).real();
                }
                for (int slot = 0; slot < n1; ++slot) {
                    const std::vector<double> row = dilate_kernel(w, slot, n1);
                    for (std::size_t col = 0; col < dim; ++col) {
                        dilated(u * n1 + slot, col) = row[col];
                    }
                }
            }
            const std::vector<double> classical =
                block_diag_apply_real(dilated, x);

            std::vector<cdouble> amps(x.size());
            for (std::size_t idx = 0; idx < x.size(); ++idx) {
                amps[idx] = x[idx];
            }
            StateVector state = StateVector::from_amplitudes(m, std::move(amps));
            apply_gate(state, bank_gate(bank, i - 1));

            for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
                max_error = std::max(
                    max_error, std::abs(state[idx] - cdouble{classical[idx], 0.0}));
            }
        }
        finish_case(suite,
                    "n=2,i=" + std::to_string(i) + ",dilation=" +
                        std::to_string(n1),
                    max_error, kTolerance);
    }
    return suite;
}

SuiteResult verify_composite(int trials, std::uint64_t seed, int max_qubits) {
    SuiteResult suite = make_suite("composite", seed, trials, max_qubits);
    SuiteTimer timer(suite);
    {
        const ConvLayout layout{4, 1, 2, 10};
        double err = 0.0;
        for (std::uint64_t c = 1; c <= 16; ++c) {
            if (stacked_output_index(layout, 1, c) != 16 * (c - 1) ||
                stacked_output_index(layout, 2, c) != 256 + 16 * (c - 1)) {
                err = 1.0;
            }
        }
        finish_case(suite, "index-lists,n=4,k=2,m=10", err, 0.0);
    }
    for (const int n : {2, 4}) {
        const int m = 2 * n + 2;
        if (m > max_qubits) {
            continue;
        }
        Rng rng(derive_seed(seed, "composite/n" + std::to_string(n)));
        const ConvLayout layout{n, 1, 2, m};
        double max_error = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            const CMatrix u = random_orthogonal(std::size_t{1} << n, rng);
            const CMatrix b = random_orthogonal(std::size_t{1} << n, rng);
            const std::vector<double> x =
                random_real_unit_vector(std::size_t{1} << m, rng);

            std::vector<cdouble> amps(x.size());
            for (std::size_t idx = 0; idx < x.size(); ++idx) {
                amps[idx] = x[idx];
            }
            StateVector state = StateVector::from_amplitudes(m, std::move(amps));
            apply_gate(state, bank_gate(u, 0));
            apply_gate(state, bank_gate(b, n));

            std::vector<double> w1(u.cols());
            for (std::size_t l = 0; l < u.cols(); ++l) {
                w1[l] = u(0, l).real();
            }
            const std::uint64_t block_len = std::uint64_t{1} << (2 * n);
            for (std::uint64_t c = 1; c <= layout.channels(); ++c) {
                std::vector<double> w2(b.cols());
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    w2[l] = b(c - 1, l).real();
                }
                const std::vector<double> kernel = composite_kernel(w2, w1);
                for (std::uint64_t j = 1; j <= layout.stacked_feature_count();
                     ++j) {
                    double expected = 0.0;
                    for (std::uint64_t l = 0; l < block_len; ++l) {
                        expected += kernel[l] * x[(j - 1) * block_len + l];
                    }
                    const cdouble simulated =
                        state[stacked_output_index(layout, j, c)];
                    max_error = std::max(
                        max_error, std::abs(simulated - cdouble{expected, 0.0}));
                }
            }
        }
        finish_case(suite, "n=" + std::to_string(n) + ",k=2,m=" +
                               std::to_string(m),
                    max_error, kTolerance);
    }
    return suite;
}

SuiteResult verify_unitarity(int trials, std::uint64_t seed, int max_qubits) {
    SuiteResult suite = make_suite("unitarity", seed, trials, max_qubits);
    SuiteTimer timer(suite);

    const std::vector<std::pair<std::string, AnsatzSpec>> specs = {
        {"ry-ring-4q5l", {4, 5, EntanglerKind::Ring, {}}},
        {"ry-line-4q3l", {4, 3, EntanglerKind::Line, {}}},
        {"xyz-ring-3q3l",
         {3, 3, EntanglerKind::Ring,
          {RotationAxis::X, RotationAxis::Y, RotationAxis::Z}}},
        {"ry-none-2q2l", {2, 2, EntanglerKind::None, {}}},
    };
    for (const auto &[id, spec] : specs) {
        Rng rng(derive_seed(seed, "unitarity/" + id));
        double max_error = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            ParamVector params(spec.parameter_count());
            for (double &p : params) {
                p = rng.uniform(-3.2, 3.2);
            }
            const KernelBank bank{build_unitary(spec, params)};
            max_error = std::max(max_error, unitarity_error(bank.matrix));
        }
        finish_case(suite, id, max_error, kTolerance);
    }
    return suite;
}

SuiteResult verify_gradients(int trials, std::uint64_t seed, int max_qubits) {
    SuiteResult suite = make_suite("gradients", seed, trials, max_qubits);
    SuiteTimer timer(suite);

    ModelConfig cfg;
    cfg.channels_between_layers = 4;
    cfg.channel_register_qubits = default_channel_register_qubits(4);
    cfg.num_classes = 4;

    double adj_vs_shift = 0.0;
    double adj_vs_fd = 0.0;
    double shift_vs_fd = 0.0;
    const auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
    };
    // The comparison is expensive (parameter-shift and finite differences are
    // 2P forwards per sample), so the trial count is capped.
    const int repeats = std::min(trials, 5);
    for (int r = 0; r < repeats; ++r) {
        Rng rng(derive_seed(seed, "gradients/trial" + std::to_string(r)));
        const ParamVector params = initial_params(
            cfg, derive_seed(seed, "gradients/params" + std::to_string(r)));
        std::vector<EncodedSample> batch;
        for (int s = 0; s < 4; ++s) {
            batch.push_back(
                {random_real_unit_vector(std::size_t{1} << cfg.data_qubits, rng),
                 s % cfg.num_classes});
        }

        const std::vector<double> adj =
            loss_gradient(cfg, params, batch, GradientMode::Adjoint);
        const std::vector<double> shift =
            loss_gradient(cfg, params, batch, GradientMode::ParameterShift);
        const std::vector<double> fd =
            loss_gradient(cfg, params, batch, GradientMode::FiniteDifference);

        for (std::size_t t = 0; t < adj.size(); ++t) {
            adj_vs_shift = std::max(adj_vs_shift, std::abs(adj[t] - shift[t]));
            adj_vs_fd = std::max(adj_vs_fd, rel(adj[t], fd[t]));
            shift_vs_fd = std::max(shift_vs_fd, rel(shift[t], fd[t]));
        }
    }
    finish_case(suite, "adjoint-vs-shift-abs", adj_vs_shift, 1e-8);
    finish_case(suite, "adjoint-vs-fd-rel", adj_vs_fd, 1e-4);
    finish_case(suite, "shift-vs-fd-rel", shift_vs_fd, 1e-4);
    return suite;
}

const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names = {
        "theorem1", "theorem2", "dilated", "composite", "unitarity",
        "gradients"};
    return names;
}

SuiteResult run_suite(const std::string &name, int trials, std::uint64_t seed,
                      int max_qubits) {
    if (trials < 1) {
        throw std::invalid_argument("run_suite: trials must be >= 1");
    }
    if (max_qubits < 4 || max_qubits > 12) {
        throw std::invalid_argument("run_suite: max_qubits must be in [4, 12]");
    }
    if (name == "theorem1") {
        return verify_single_layer(trials, seed, max_qubits);
    }
    if (name == "theorem2") {
        return verify_stacked_layers(trials, seed, max_qubits);
    }
    if (name == "dilated") {
        return verify_dilated(trials, seed, max_qubits);
    }
    if (name == "composite") {
        return verify_composite(trials, seed, max_qubits);
    }
    if (name == "unitarity") {
        return verify_unitarity(trials, seed, max_qubits);
    }
    if (name == "gradients") {
        return verify_gradients(trials, seed, max_qubits);
    }
    throw std::invalid_argument("unknown suite name: " + name);
}

} // namespace qconv
