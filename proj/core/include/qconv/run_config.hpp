// Run configuration, checkpoint, metrics and verification-report files. All
// are JSON with a schema_version field; parsing is strict and rejects
// unknown keys so stale configs fail loudly instead of silently.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qconv/trainer.hpp"
#include "qconv/verify.hpp"

namespace qconv {

constexpr int kSchemaVersion = 1;

/// Bad or inconsistent configuration content (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Missing or unreadable files (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::string data_dir; // empty = resolve from QCONV_DATA_DIR
    std::string checkpoint_path = "checkpoint.json";
    std::string metrics_path = "metrics.json";
    ModelConfig model;
    TrainConfig train;
    std::vector<int> classes; // empty = 0..num_classes-1

    std::vector<int> effective_classes() const;
    void validate() const;
};

RunConfig parse_run_config_text(const std::string &json_text);
RunConfig load_run_config(const std::string &path);
std::string run_config_to_text(const RunConfig &cfg);

struct Checkpoint {
    RunConfig config;
    ParamVector params;
};

void save_checkpoint(const std::string &path, const RunConfig &cfg,
                     const ParamVector &params);
Checkpoint load_checkpoint(const std::string &path);

void save_metrics(const std::string &path, const RunConfig &cfg,
                  const Metrics &metrics);

/// The subset of a metrics file needed by plot export.
struct LoadedMetrics {
    std::vector<EpochRecord> epochs;
    std::vector<std::vector<int>> confusion;
};

LoadedMetrics load_metrics(const std::string &path);

void save_verify_report(const std::string &path,
                        const std::vector<SuiteResult> &suites,
                        std::uint64_t seed, int trials, int max_qubits);

} // namespace qconv
