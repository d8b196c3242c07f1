// Command-line front end: property-verification suites, training and
// evaluation runs, and plot-data export.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qconv/mnist_io.hpp"
#include "qconv/random.hpp"
#include "qconv/run_config.hpp"
#include "qconv/trainer.hpp"
#include "qconv/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

std::string resolve_data_dir(const std::string &flag_value,
                             const std::string &config_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (!config_value.empty()) {
        return config_value;
    }
    if (const char *env = std::getenv("QCONV_DATA_DIR")) {
        return env;
    }
    throw qconv::IoError(
        "no data directory: pass --data-dir, set data_dir in the config, or "
        "export QCONV_DATA_DIR");
}

struct SplitData {
    std::vector<qconv::EncodedSample> train;
    std::vector<qconv::EncodedSample> test;
};

SplitData load_split(const qconv::RunConfig &cfg, const std::string &data_dir) {
    const qconv::Dataset pool = qconv::load_dataset(data_dir);
    const auto [train_set, test_set] =
        qconv::subset(pool, cfg.effective_classes(), cfg.train.train_per_class,
                      cfg.train.test_per_class,
                      qconv::derive_seed(cfg.seed, "subset"));
    return {qconv::encode_dataset(cfg.model, train_set),
            qconv::encode_dataset(cfg.model, test_set)};
}

int cmd_verify(const std::string &suite, int trials, std::uint64_t seed,
               int max_qubits, const std::string &out_path) {
    std::vector<std::string> selected;
    if (suite == "all") {
        selected = qconv::suite_names();
    } else {
        selected = {suite};
    }
    std::vector<qconv::SuiteResult> results;
    bool all_passed = true;
    for (const std::string &name : selected) {
        qconv::SuiteResult r = qconv::run_suite(name, trials, seed, max_qubits);
        for (const qconv::CaseResult &c : r.cases) {
            std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << r.name << " "
                      << c.id << "  max_error=" << c.max_error
                      << " tolerance=" << c.tolerance << "\n";
        }
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << "suite " << r.name
                  << "  max_error=" << r.max_error << "  ("
                  << r.elapsed_seconds << " s)\n";
        all_passed = all_passed && r.passed;
        results.push_back(std::move(r));
    }
    if (!out_path.empty()) {
        qconv::save_verify_report(out_path, results, seed, trials, max_qubits);
        std::cout << "report written to " << out_path << "\n";
    }
    return all_passed ? kExitOk : kExitVerifyFailure;
}

int cmd_train(const std::string &config_path, const std::string &data_dir_flag,
              bool seed_set, std::uint64_t seed_override,
              const std::string &out_dir) {
    qconv::RunConfig cfg = qconv::load_run_config(config_path);
    if (seed_set) {
        cfg.seed = seed_override;
        cfg.train.seed = seed_override;
    }
    const std::string data_dir = resolve_data_dir(data_dir_flag, cfg.data_dir);
    cfg.data_dir = data_dir;

    SplitData data = load_split(cfg, data_dir);
    std::cout << "training on " << data.train.size() << " samples, testing on "
              << data.test.size() << " (seed " << cfg.seed << ")\n";

    const qconv::TrainResult result =
        qconv::train(cfg.train, cfg.model, data.train, data.test);

    std::string checkpoint_path = cfg.checkpoint_path;
    std::string metrics_path = cfg.metrics_path;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        checkpoint_path =
            (std::filesystem::path(out_dir) /
             std::filesystem::path(checkpoint_path).filename()).string();
        metrics_path = (std::filesystem::path(out_dir) /
                        std::filesystem::path(metrics_path).filename()).string();
    }
    qconv::save_checkpoint(checkpoint_path, cfg, result.params);
    qconv::save_metrics(metrics_path, cfg, result.metrics);

    std::cout << "final test accuracy " << result.metrics.final_test_accuracy
              << ", categories learned " << result.metrics.categories_learned
              << "\n"
              << "checkpoint: " << checkpoint_path << "\n"
              << "metrics:    " << metrics_path << "\n";
    return kExitOk;
}

int cmd_eval(const std::string &checkpoint_path,
             const std::string &data_dir_flag, bool seed_set,
             std::uint64_t seed_override, const std::string &out_path) {
    qconv::Checkpoint ck = qconv::load_checkpoint(checkpoint_path);
    if (seed_set) {
        ck.config.seed = seed_override;
        ck.config.train.seed = seed_override;
    }
    const std::string data_dir =
        resolve_data_dir(data_dir_flag, ck.config.data_dir);
    ck.config.data_dir = data_dir;

    SplitData data = load_split(ck.config, data_dir);
    const qconv::Metrics metrics =
        qconv::evaluate(ck.config.model, ck.params, data.test);

    const std::string metrics_path =
        out_path.empty() ? "eval_metrics.json" : out_path;
    qconv::save_metrics(metrics_path, ck.config, metrics);
    std::cout << "test accuracy " << metrics.final_test_accuracy
              << ", categories learned " << metrics.categories_learned << "\n"
              << "metrics: " << metrics_path << "\n";
    return kExitOk;
}

int cmd_export_plots(const std::vector<std::string> &metrics_files,
                     const std::string &out_dir) {
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
    }
    for (const std::string &path : metrics_files) {
        const qconv::LoadedMetrics m = qconv::load_metrics(path);
        const std::string stem = std::filesystem::path(path).stem().string();
        const std::filesystem::path dir =
            out_dir.empty() ? std::filesystem::path(path).parent_path()
                            : std::filesystem::path(out_dir);

        const std::string categories_path =
            (dir / (stem + "_categories.dat")).string();
        std::ofstream cat(categories_path);
        if (!cat) {
            throw qconv::IoError("cannot write " + categories_path);
        }
        cat << "# epoch categories_learned\n";
        for (const qconv::EpochRecord &e : m.epochs) {
            cat << e.epoch << " " << e.categories_learned << "\n";
        }

        const std::string confusion_path =
            (dir / (stem + "_confusion.dat")).string();
        std::ofstream conf(confusion_path);
        if (!conf) {
            throw qconv::IoError("cannot write " + confusion_path);
        }
        conf << "# confusion matrix: rows = true class, cols = predicted\n";
        for (const auto &row : m.confusion) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                conf << row[c] << (c + 1 < row.size() ? " " : "\n");
            }
        }
        std::cout << "wrote " << categories_path << " and " << confusion_path
                  << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Statevector simulator and trainer for gate-as-convolution "
                 "classifiers"};
    app.require_subcommand(1);

    // verify
    auto *verify = app.add_subcommand(
        "verify", "Run property-verification suites against the classical "
                  "reference path");
    std::string suite = "all";
    int trials = 100;
    std::uint64_t verify_seed = 42;
    int max_qubits = 10;
    std::string report_path = "verify_report.json";
    verify->add_option("--suite", suite,
                       "theorem1|theorem2|dilated|composite|unitarity|"
                       "gradients|all");
    verify->add_option("--trials", trials, "Trials per case");
    verify->add_option("--seed", verify_seed, "Master seed");
    verify->add_option("--max-qubits", max_qubits, "Largest register swept (<= 12)");
    verify->add_option("--out", report_path, "Report file (JSON)");

    // train
    auto *train = app.add_subcommand("train", "Train a classifier from a config file");
    std::string config_path;
    std::string data_dir;
    std::uint64_t seed_override = 0;
    std::string out_dir;
    train->add_option("--config", config_path, "Run configuration (JSON)")
        ->required();
    train->add_option("--data-dir", data_dir,
                      "MNIST IDX directory (default: config, then QCONV_DATA_DIR)");
    auto *train_seed_opt =
        train->add_option("--seed", seed_override, "Override the config seed");
    train->add_option("--out", out_dir, "Directory for checkpoint/metrics files");

    // eval
    auto *eval = app.add_subcommand("eval", "Re-evaluate a checkpoint on its test split");
    std::string checkpoint_path;
    std::string eval_data_dir;
    std::uint64_t eval_seed = 0;
    std::string eval_out;
    eval->add_option("checkpoint", checkpoint_path, "Checkpoint file")->required();
    eval->add_option("--data-dir", eval_data_dir, "MNIST IDX directory");
    auto *eval_seed_opt =
        eval->add_option("--seed", eval_seed, "Override the subset seed");
    eval->add_option("--out", eval_out, "Metrics output file");

    // export-plots
    auto *export_plots = app.add_subcommand(
        "export-plots", "Write columnar plot data from metrics files");
    std::vector<std::string> metrics_files;
    std::string plots_out;
    export_plots->add_option("metrics", metrics_files, "Metrics files (JSON)")
        ->required();
    export_plots->add_option("--out", plots_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (verify->parsed()) {
            if (suite != "all") {
                const auto &names = qconv::suite_names();
                if (std::find(names.begin(), names.end(), suite) ==
                    names.end()) {
                    std::cerr << "unknown suite name: " << suite << "\n";
                    return kExitConfigError;
                }
            }
            return cmd_verify(suite, trials, verify_seed, max_qubits,
                              report_path);
        }
        if (train->parsed()) {
            return cmd_train(config_path, data_dir, train_seed_opt->count() > 0,
                             seed_override, out_dir);
        }
        if (eval->parsed()) {
            return cmd_eval(checkpoint_path, eval_data_dir,
                            eval_seed_opt->count() > 0, eval_seed, eval_out);
        }
        if (export_plots->parsed()) {
            return cmd_export_plots(metrics_files, plots_out);
        }
    } catch (const qconv::ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const qconv::IoError &e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return kExitConfigError;
}
