#include "qconv/run_config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

#include "qconv/random.hpp"

namespace qconv {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json &obj, const std::string &where,
                         const std::set<std::string> &allowed) {
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const json &obj, const std::string &key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

template <typename T>
T get_required(const json &obj, const std::string &where,
               const std::string &key) {
    if (!obj.contains(key)) {
        throw ConfigError("missing key '" + key + "' in " + where);
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

std::string axis_name(RotationAxis a) {
    switch (a) {
    case RotationAxis::X: return "x";
    case RotationAxis::Y: return "y";
    case RotationAxis::Z: return "z";
    }
    return "y";
}

RotationAxis axis_from_name(const std::string &s) {
    if (s == "x") return RotationAxis::X;
    if (s == "y") return RotationAxis::Y;
    if (s == "z") return RotationAxis::Z;
    throw ConfigError("unknown rotation axis '" + s + "'");
}

std::string entangler_name(EntanglerKind e) {
    switch (e) {
    case EntanglerKind::None: return "none";
    case EntanglerKind::Line: return "line";
    case EntanglerKind::Ring: return "ring";
    }
    return "ring";
}

EntanglerKind entangler_from_name(const std::string &s) {
    if (s == "none") return EntanglerKind::None;
    if (s == "line") return EntanglerKind::Line;
    if (s == "ring") return EntanglerKind::Ring;
    throw ConfigError("unknown entangler '" + s + "'");
}

std::string mode_name(SecondLayerMode m) {
    return m == SecondLayerMode::SharedB ? "shared-b" : "per-channel-b";
}

SecondLayerMode mode_from_name(const std::string &s) {
    if (s == "shared-b") return SecondLayerMode::SharedB;
    if (s == "per-channel-b") return SecondLayerMode::PerChannelB;
    throw ConfigError("unknown second_layer_mode '" + s + "'");
}

std::string grad_name(GradientMode m) {
    switch (m) {
    case GradientMode::Adjoint: return "adjoint";
    case GradientMode::ParameterShift: return "parameter-shift";
    case GradientMode::FiniteDifference: return "finite-difference";
    }
    return "adjoint";
}

GradientMode grad_from_name(const std::string &s) {
    if (s == "adjoint") return GradientMode::Adjoint;
    if (s == "parameter-shift") return GradientMode::ParameterShift;
    if (s == "finite-difference") return GradientMode::FiniteDifference;
    throw ConfigError("unknown gradient_mode '" + s + "'");
}

std::string pad_name(PadMode m) {
    return m == PadMode::Centered ? "centered" : "corner";
}

PadMode pad_from_name(const std::string &s) {
    if (s == "centered") return PadMode::Centered;
    if (s == "corner") return PadMode::CornerAnchored;
    throw ConfigError("unknown pad_mode '" + s + "'");
}

AnsatzSpec parse_ansatz(const json &obj) {
    reject_unknown_keys(obj, "ansatz",
                        {"num_qubits", "num_layers", "entangler",
                         "rotation_axes"});
    AnsatzSpec spec;
    spec.num_qubits = get_or(obj, "num_qubits", spec.num_qubits);
    spec.num_layers = get_or(obj, "num_layers", spec.num_layers);
    spec.entangler = entangler_from_name(
        get_or<std::string>(obj, "entangler", entangler_name(spec.entangler)));
    if (obj.contains("rotation_axes")) {
        for (const auto &a : obj.at("rotation_axes")) {
            spec.layer_axes.push_back(axis_from_name(a.get<std::string>()));
        }
    }
    return spec;
}

json ansatz_to_json(const AnsatzSpec &spec) {
    json obj;
    obj["num_qubits"] = spec.num_qubits;
    obj["num_layers"] = spec.num_layers;
    obj["entangler"] = entangler_name(spec.entangler);
    json axes = json::array();
    for (int layer = 0; layer < spec.num_layers; ++layer) {
        axes.push_back(axis_name(spec.axis_for_layer(layer)));
    }
    obj["rotation_axes"] = axes;
    return obj;
}

ModelConfig parse_model(const json &obj, const json &ansatz_obj) {
    reject_unknown_keys(obj, "model",
                        {"data_qubits", "kernel_qubits",
                         "channels_between_layers", "channel_register_qubits",
                         "layer_register_qubits", "num_classes",
                         "measured_channels", "second_layer_mode", "pad_mode"});
    ModelConfig cfg;
    cfg.data_qubits = get_or(obj, "data_qubits", cfg.data_qubits);
    cfg.kernel_qubits = get_or(obj, "kernel_qubits", cfg.kernel_qubits);
    cfg.channels_between_layers =
        get_or(obj, "channels_between_layers", cfg.channels_between_layers);
    cfg.channel_register_qubits =
        get_or(obj, "channel_register_qubits",
               default_channel_register_qubits(cfg.channels_between_layers));
    cfg.layer_register_qubits =
        get_or(obj, "layer_register_qubits",
               cfg.channels_between_layers > 0 ? 1 : 0);
    cfg.num_classes = get_or(obj, "num_classes", cfg.num_classes);
    cfg.measured_channels = get_or(obj, "measured_channels", cfg.measured_channels);
    cfg.second_layer_mode = mode_from_name(get_or<std::string>(
        obj, "second_layer_mode", mode_name(cfg.second_layer_mode)));
    cfg.pad_mode =
        pad_from_name(get_or<std::string>(obj, "pad_mode", pad_name(cfg.pad_mode)));
    cfg.ansatz = parse_ansatz(ansatz_obj);
    return cfg;
}

json model_to_json(const ModelConfig &cfg) {
    json obj;
    obj["data_qubits"] = cfg.data_qubits;
    obj["kernel_qubits"] = cfg.kernel_qubits;
    obj["channels_between_layers"] = cfg.channels_between_layers;
    obj["channel_register_qubits"] = cfg.channel_register_qubits;
    obj["layer_register_qubits"] = cfg.layer_register_qubits;
    obj["num_classes"] = cfg.num_classes;
    obj["measured_channels"] = cfg.measured_channels;
    obj["second_layer_mode"] = mode_name(cfg.second_layer_mode);
    obj["pad_mode"] = pad_name(cfg.pad_mode);
    return obj;
}

TrainConfig parse_train(const json &obj, std::uint64_t seed) {
    reject_unknown_keys(obj, "train",
                        {"epochs", "learning_rate", "batch_size", "adam_beta1",
                         "adam_beta2", "adam_epsilon", "gradient_mode",
                         "classes", "train_per_class", "test_per_class"});
    TrainConfig cfg;
    cfg.epochs = get_or(obj, "epochs", cfg.epochs);
    cfg.learning_rate = get_or(obj, "learning_rate", cfg.learning_rate);
    cfg.batch_size = get_or(obj, "batch_size", cfg.batch_size);
    cfg.adam_beta1 = get_or(obj, "adam_beta1", cfg.adam_beta1);
    cfg.adam_beta2 = get_or(obj, "adam_beta2", cfg.adam_beta2);
    cfg.adam_epsilon = get_or(obj, "adam_epsilon", cfg.adam_epsilon);
    cfg.gradient_mode = grad_from_name(get_or<std::string>(
        obj, "gradient_mode", grad_name(cfg.gradient_mode)));
    cfg.train_per_class = get_or(obj, "train_per_class", cfg.train_per_class);
    cfg.test_per_class = get_or(obj, "test_per_class", cfg.test_per_class);
    cfg.seed = seed;
    return cfg;
}

json train_to_json(const TrainConfig &cfg) {
    json obj;
    obj["epochs"] = cfg.epochs;
    obj["learning_rate"] = cfg.learning_rate;
    obj["batch_size"] = cfg.batch_size;
    obj["adam_beta1"] = cfg.adam_beta1;
    obj["adam_beta2"] = cfg.adam_beta2;
    obj["adam_epsilon"] = cfg.adam_epsilon;
    obj["gradient_mode"] = grad_name(cfg.gradient_mode);
    obj["train_per_class"] = cfg.train_per_class;
    obj["test_per_class"] = cfg.test_per_class;
    return obj;
}

json config_to_json(const RunConfig &cfg) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["seed"] = cfg.seed;
    if (!cfg.data_dir.empty()) {
        root["data_dir"] = cfg.data_dir;
    }
    root["output"] = {{"checkpoint", cfg.checkpoint_path},
                      {"metrics", cfg.metrics_path}};
    root["model"] = model_to_json(cfg.model);
    root["ansatz"] = ansatz_to_json(cfg.model.ansatz);
    json train = train_to_json(cfg.train);
    train["classes"] = cfg.effective_classes();
    root["train"] = train;
    return root;
}

RunConfig parse_run_config_json(const json &root) {
    if (!root.is_object()) {
        throw ConfigError("config root must be an object");
    }
    reject_unknown_keys(root, "config",
                        {"schema_version", "seed", "data_dir", "output",
                         "model", "ansatz", "train"});
    const int version = get_required<int>(root, "config", "schema_version");
    if (version != kSchemaVersion) {
        throw ConfigError("unsupported schema_version " +
                          std::to_string(version));
    }
    RunConfig cfg;
    cfg.seed = get_required<std::uint64_t>(root, "config", "seed");
    cfg.data_dir = get_or<std::string>(root, "data_dir", "");
    if (root.contains("output")) {
        const json &out = root.at("output");
        reject_unknown_keys(out, "output", {"checkpoint", "metrics"});
        cfg.checkpoint_path =
            get_or<std::string>(out, "checkpoint", cfg.checkpoint_path);
        cfg.metrics_path = get_or<std::string>(out, "metrics", cfg.metrics_path);
    }
    const json model_obj = root.contains("model") ? root.at("model") : json::object();
    const json ansatz_obj =
        root.contains("ansatz") ? root.at("ansatz") : json::object();
    cfg.model = parse_model(model_obj, ansatz_obj);
    const json train_obj = root.contains("train") ? root.at("train") : json::object();
    cfg.train = parse_train(train_obj, cfg.seed);
    if (train_obj.contains("classes")) {
        cfg.classes = train_obj.at("classes").get<std::vector<int>>();
    }
    cfg.validate();
    return cfg;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    json root;
    try {
        in >> root;
    } catch (const json::exception &e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    return root;
}

void write_json_file(const std::string &path, const json &root) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << root.dump(2) << "\n";
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

} // namespace

std::vector<int> RunConfig::effective_classes() const {
    if (!classes.empty()) {
        return classes;
    }
    std::vector<int> out;
    for (int k = 0; k < model.num_classes; ++k) {
        out.push_back(k);
    }
    return out;
}

void RunConfig::validate() const {
    try {
        model.validate();
        train.validate();
    } catch (const std::exception &e) {
        throw ConfigError(e.what());
    }
    const auto cls = effective_classes();
    if (cls.size() != static_cast<std::size_t>(model.num_classes)) {
        throw ConfigError("classes list length must equal num_classes");
    }
    for (const int c : cls) {
        if (c < 0 || c > 9) {
            throw ConfigError("class labels must be digits 0..9");
        }
    }
}

RunConfig parse_run_config_text(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config_json(root);
}

RunConfig load_run_config(const std::string &path) {
    return parse_run_config_json(read_json_file(path));
}

std::string run_config_to_text(const RunConfig &cfg) {
    return config_to_json(cfg).dump(2);
}

void save_checkpoint(const std::string &path, const RunConfig &cfg,
                     const ParamVector &params) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["seed"] = cfg.seed;
    root["sub_seeds"] = {
        {"params", derive_seed(cfg.seed, "params")},
        {"subset", derive_seed(cfg.seed, "subset")},
    };
    root["config"] = config_to_json(cfg);
    root["params"] = params;
    write_json_file(path, root);
}

Checkpoint load_checkpoint(const std::string &path) {
    const json root = read_json_file(path);
    if (!root.is_object() || !root.contains("schema_version") ||
        !root.contains("config") || !root.contains("params")) {
        throw ConfigError(path + ": not a checkpoint file");
    }
    if (root.at("schema_version").get<int>() != kSchemaVersion) {
        throw ConfigError(path + ": unsupported checkpoint schema");
    }
    Checkpoint ck;
    ck.config = parse_run_config_json(root.at("config"));
    try {
        ck.params = root.at("params").get<ParamVector>();
    } catch (const json::exception &e) {
        throw ConfigError(path + ": bad params array: " + e.what());
    }
    if (ck.params.size() !=
        static_cast<std::size_t>(ck.config.model.parameter_count())) {
        throw ConfigError(path + ": parameter count does not match the config");
    }
    return ck;
}

void save_metrics(const std::string &path, const RunConfig &cfg,
                  const Metrics &metrics) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["seed"] = cfg.seed;
    root["sub_seeds"] = {
        {"params", derive_seed(cfg.seed, "params")},
        {"subset", derive_seed(cfg.seed, "subset")},
    };
    root["config"] = config_to_json(cfg);
    json epochs = json::array();
    for (const EpochRecord &e : metrics.epochs) {
        epochs.push_back({{"epoch", e.epoch},
                          {"train_loss", e.train_loss},
                          {"train_accuracy", e.train_accuracy},
                          {"test_accuracy", e.test_accuracy},
                          {"categories_learned", e.categories_learned}});
    }
    root["epochs"] = epochs;
    root["final"] = {{"train_accuracy", metrics.final_train_accuracy},
                     {"test_accuracy", metrics.final_test_accuracy},
                     {"confusion_matrix", metrics.confusion},
                     {"categories_learned", metrics.categories_learned}};
    root["gradient_clip_events"] = metrics.gradient_clip_events;
    root["wall_clock_seconds"] = metrics.wall_clock_seconds;
    write_json_file(path, root);
}

LoadedMetrics load_metrics(const std::string &path) {
    const json root = read_json_file(path);
    if (!root.is_object() || !root.contains("epochs") ||
        !root.contains("final")) {
        throw ConfigError(path + ": not a metrics file");
    }
    LoadedMetrics out;
    try {
        for (const json &e : root.at("epochs")) {
            EpochRecord rec;
            rec.epoch = e.at("epoch").get<int>();
            rec.train_loss = e.at("train_loss").get<double>();
            rec.train_accuracy = e.at("train_accuracy").get<double>();
            rec.test_accuracy = e.at("test_accuracy").get<double>();
            rec.categories_learned = e.at("categories_learned").get<int>();
            out.epochs.push_back(rec);
        }
        out.confusion = root.at("final")
                            .at("confusion_matrix")
                            .get<std::vector<std::vector<int>>>();
    } catch (const json::exception &e) {
        throw ConfigError(path + ": malformed metrics: " + e.what());
    }
    return out;
}

void save_verify_report(const std::string &path,
                        const std::vector<SuiteResult> &suites,
                        std::uint64_t seed, int trials, int max_qubits) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["seed"] = seed;
    root["trials"] = trials;
    root["max_qubits"] = max_qubits;
    bool all_passed = true;
    json suites_json = json::array();
    for (const SuiteResult &s : suites) {
        json cases = json::array();
        for (const CaseResult &c : s.cases) {
            cases.push_back({{"id", c.id},
                             {"max_error", c.max_error},
                             {"tolerance", c.tolerance},
                             {"pass", c.passed}});
        }
        suites_json.push_back({{"name", s.name},
                               {"seed", s.seed},
                               {"trials", s.trials},
                               {"max_qubits", s.max_qubits},
                               {"cases", cases},
                               {"max_error", s.max_error},
                               {"passed", s.passed},
                               {"elapsed_seconds", s.elapsed_seconds}});
        all_passed = all_passed && s.passed;
    }
    root["suites"] = suites_json;
    root["passed"] = all_passed;
    write_json_file(path, root);
}

} // namespace qconv
