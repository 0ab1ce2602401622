// Copyright 2026 The qpatch Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qpatch/checkpoint.hpp"

#include "qpatch/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qpatch {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ReducerKind parse_reducer(const std::string &s) {
    if (s == "proposed") {
        return ReducerKind::Proposed;
    }
    if (s == "naive-pool") {
        return ReducerKind::NaivePool;
    }
    throw FormatError("unknown reducer kind '" + s + "'");
}

ClassifierKind parse_classifier(const std::string &s) {
    if (s == "quantum") {
        return ClassifierKind::Quantum;
    }
    if (s == "fcc") {
        return ClassifierKind::Fcc;
    }
    throw FormatError("unknown classifier kind '" + s + "'");
}

ordered_json config_json(const TrainConfig &c) {
    ordered_json j;
    j["classes"] = {c.classes.first, c.classes.second};
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["lr_high"] = c.lr_high;
    j["lr_low"] = c.lr_low;
    j["lr_switch_acc"] = c.lr_switch_acc;
    j["momentum"] = c.momentum;
    j["eval_every"] = c.eval_every;
    j["seed"] = c.seed;
    j["reducer"] = to_string(c.reducer_kind);
    j["classifier"] = to_string(c.classifier_kind);
    j["patch"] = c.patch;
    j["train_per_class"] = c.train_per_class;
    j["test_per_class"] = c.test_per_class;
    j["eval_size"] = c.eval_size;
    j["sharing"] = {
        {"reducer_conv_shared", c.policy.reducer_conv_shared},
        {"reducer_pool_shared", c.policy.reducer_pool_shared},
        {"classifier_conv_shared", c.policy.classifier_conv_shared},
        {"classifier_pool_shared", c.policy.classifier_pool_shared},
        {"rotation_layer_shared", c.policy.rotation_layer_shared},
        {"aux_rotations_trainable", c.policy.aux_rotations_trainable},
    };
    return j;
}

template <class T> void read_if(const json &j, const char *key, T &out) {
    if (j.contains(key)) {
        j.at(key).get_to(out);
    }
}

TrainConfig config_from(const json &j) {
    TrainConfig c;
    if (j.contains("classes")) {
        const auto &cl = j.at("classes");
        if (!cl.is_array() || cl.size() != 2) {
            throw FormatError("config 'classes' must be a two-element array");
        }
        c.classes = {cl[0].get<int>(), cl[1].get<int>()};
    }
    read_if(j, "epochs", c.epochs);
    read_if(j, "batch_size", c.batch_size);
    read_if(j, "lr_high", c.lr_high);
    read_if(j, "lr_low", c.lr_low);
    read_if(j, "lr_switch_acc", c.lr_switch_acc);
    read_if(j, "momentum", c.momentum);
    read_if(j, "eval_every", c.eval_every);
    read_if(j, "seed", c.seed);
    read_if(j, "patch", c.patch);
    read_if(j, "train_per_class", c.train_per_class);
    read_if(j, "test_per_class", c.test_per_class);
    read_if(j, "eval_size", c.eval_size);
    if (j.contains("reducer")) {
        c.reducer_kind = parse_reducer(j.at("reducer").get<std::string>());
    }
    if (j.contains("classifier")) {
        c.classifier_kind = parse_classifier(j.at("classifier").get<std::string>());
    }
    if (j.contains("sharing")) {
        const auto &s = j.at("sharing");
        read_if(s, "reducer_conv_shared", c.policy.reducer_conv_shared);
        read_if(s, "reducer_pool_shared", c.policy.reducer_pool_shared);
        read_if(s, "classifier_conv_shared", c.policy.classifier_conv_shared);
        read_if(s, "classifier_pool_shared", c.policy.classifier_pool_shared);
        read_if(s, "rotation_layer_shared", c.policy.rotation_layer_shared);
        read_if(s, "aux_rotations_trainable", c.policy.aux_rotations_trainable);
    }
    return c;
}

ordered_json params_json(const ParameterSet &p) {
    ordered_json arr = ordered_json::array();
    for (const auto &g : p.groups()) {
        arr.push_back({{"name", g.name}, {"trainable", g.trainable}, {"values", g.values}});
    }
    return arr;
}

ParameterSet params_from(const json &arr) {
    if (!arr.is_array()) {
        throw FormatError("parameter groups must be an array");
    }
    ParameterSet p;
    for (const auto &g : arr) {
        const auto values = g.at("values").get<std::vector<double>>();
        const std::size_t idx = p.add_group(g.at("name").get<std::string>(),
                                            values.size(),
                                            g.at("trainable").get<bool>());
        p.group(idx).values = values;
    }
    return p;
}

void load_into(ParameterSet &target, const ParameterSet &source, const char *what) {
    if (target.group_count() != source.group_count()) {
        throw ValidationError(std::string(what) +
                              ": checkpoint parameter groups do not match the "
                              "configured architecture");
    }
    for (std::size_t g = 0; g < target.group_count(); ++g) {
        auto &t = target.group(g);
        const auto &s = source.group(g);
        if (t.name != s.name || t.values.size() != s.values.size() ||
            t.trainable != s.trainable) {
            throw ValidationError(std::string(what) + ": group '" + s.name +
                                  "' does not match '" + t.name + "'");
        }
        t.values = s.values;
    }
}

std::string format_double(const char *fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

} // namespace

std::string config_to_json(const TrainConfig &config) {
    return config_json(config).dump();
}

TrainConfig config_from_json(std::string_view text) {
    try {
        return config_from(json::parse(text));
    } catch (const json::exception &e) {
        throw FormatError(std::string("malformed config JSON: ") + e.what());
    }
}

Checkpoint make_checkpoint(const TrainConfig &config, const Model &model,
                           const OptimizerState &optimizer, std::size_t iteration,
                           double test_accuracy) {
    return Checkpoint{kCheckpointFormatVersion,
                      config,
                      model.reducer.params,
                      model.classifier.params(),
                      optimizer,
                      iteration,
                      test_accuracy};
}

std::string serialize_checkpoint(const Checkpoint &ckpt) {
    ordered_json j;
    j["format"] = "qpatch-checkpoint";
    j["format_version"] = ckpt.format_version;
    j["config"] = config_json(ckpt.config);
    j["seed"] = ckpt.config.seed;
    j["iteration"] = ckpt.iteration;
    j["test_accuracy"] = ckpt.test_accuracy;
    j["parameters"] = {
        {"reducer", params_json(ckpt.reducer_params)},
        {"classifier", params_json(ckpt.classifier_params)},
    };
    j["optimizer"] = {
        {"learning_rate", ckpt.optimizer.learning_rate},
        {"iteration", ckpt.optimizer.iteration},
        {"best_accuracy", ckpt.optimizer.best_accuracy},
        {"velocity", ckpt.optimizer.velocity},
    };
    return j.dump(2) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text) {
    try {
        const json j = json::parse(text);
        if (j.value("format", std::string{}) != "qpatch-checkpoint") {
            throw FormatError("not a qpatch checkpoint");
        }
        Checkpoint c;
        c.format_version = j.at("format_version").get<int>();
        if (c.format_version != kCheckpointFormatVersion) {
            throw FormatError("unsupported checkpoint version " +
                              std::to_string(c.format_version));
        }
        c.config = config_from(j.at("config"));
        c.iteration = j.at("iteration").get<std::size_t>();
        c.test_accuracy = j.at("test_accuracy").get<double>();
        c.reducer_params = params_from(j.at("parameters").at("reducer"));
        c.classifier_params = params_from(j.at("parameters").at("classifier"));
        const auto &o = j.at("optimizer");
        c.optimizer.learning_rate = o.at("learning_rate").get<double>();
        c.optimizer.iteration = o.at("iteration").get<std::size_t>();
        c.optimizer.best_accuracy = o.at("best_accuracy").get<double>();
        c.optimizer.velocity = o.at("velocity").get<std::vector<double>>();
        return c;
    } catch (const json::exception &e) {
        throw FormatError(std::string("malformed checkpoint: ") + e.what());
    }
}

void write_file_atomic(const std::filesystem::path &path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw DataError("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt) {
    write_file_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open checkpoint " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_checkpoint(ss.str());
}

Model restore_model(const Checkpoint &ckpt) {
    Model m = build_model(ckpt.config);
    load_into(m.reducer.params, ckpt.reducer_params, "reducer");
    load_into(m.classifier.params(), ckpt.classifier_params, "classifier");
    return m;
}

void write_metrics_preamble(std::ostream &out, const TrainConfig &config) {
    out << "# qpatch metrics v1\n";
    out << "# seed: " << config.seed << "\n";
    out << "# config: " << config_to_json(config) << "\n";
    out << kMetricsHeader << "\n";
}

void write_metrics_row(std::ostream &out, const TrainingRecord &rec) {
    out << rec.iteration << ',' << rec.epoch << ','
        << format_double("%.10g", rec.train_loss) << ','
        << format_double("%.6f", rec.test_accuracy) << ','
        << format_double("%g", rec.learning_rate) << ','
        << format_double("%.3f", rec.wall_seconds) << '\n';
}

} // namespace qpatch
