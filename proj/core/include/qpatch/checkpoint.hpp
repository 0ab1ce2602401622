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
/**
 * @file
 * Run artifacts: config echo, checkpoint documents and the metrics CSV.
 * The byte layout of both files is described in docs/file_formats.md.
 */
#pragma once

#include "qpatch/train.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qpatch {

inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr std::string_view kMetricsHeader =
    "iteration,epoch,train_loss,test_accuracy,learning_rate,wall_seconds";

/// Single-line JSON object with every TrainConfig field.
[[nodiscard]] std::string config_to_json(const TrainConfig &config);
/// Inverse of config_to_json; missing keys keep their defaults.
[[nodiscard]] TrainConfig config_from_json(std::string_view json);

struct Checkpoint {
    int format_version = kCheckpointFormatVersion;
    TrainConfig config;
    ParameterSet reducer_params;
    ParameterSet classifier_params;
    OptimizerState optimizer;
    std::size_t iteration = 0;
    double test_accuracy = 0.0;
};

[[nodiscard]] Checkpoint make_checkpoint(const TrainConfig &config,
                                         const Model &model,
                                         const OptimizerState &optimizer,
                                         std::size_t iteration,
                                         double test_accuracy);

[[nodiscard]] std::string serialize_checkpoint(const Checkpoint &ckpt);
/// Throws FormatError on malformed documents or unknown versions.
[[nodiscard]] Checkpoint parse_checkpoint(std::string_view text);

/// Writes to a sibling temporary file and renames it into place, so an
/// interrupted run always leaves the previous complete checkpoint.
void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt);
[[nodiscard]] Checkpoint load_checkpoint(const std::filesystem::path &path);

/// Rebuilds the architecture from the checkpoint config and loads its
/// parameters. Throws ValidationError if the parameter groups disagree.
[[nodiscard]] Model restore_model(const Checkpoint &ckpt);

/// `# key: value` preamble lines followed by the CSV header.
void write_metrics_preamble(std::ostream &out, const TrainConfig &config);
void write_metrics_row(std::ostream &out, const TrainingRecord &rec);

/// Writes a text file atomically (temporary file plus rename).
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

} // namespace qpatch
