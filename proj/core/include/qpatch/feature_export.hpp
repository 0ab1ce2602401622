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
 * Export of reduced feature matrices, one record per image, as CSV or as
 * the little-endian "QPRF" binary container (see docs/file_formats.md).
 */
#pragma once

#include "qpatch/reducer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qpatch {

struct FeatureRecord {
    std::size_t source_index = 0;
    int class_id = 0;
    ReducedFeatureMatrix features;
};

enum FeaturePart : std::uint32_t {
    kPartGamma = 1,
    kPartQuantum = 2,
    kPartMask = 4,
};

/// Writes `# ` comment lines (format tag, config echo) and then one row per
/// record: index,source_index,class_id,gamma_0..,[quantum_0..],[mask_0..].
void write_features_csv(std::ostream &out, const std::vector<FeatureRecord> &records,
                        std::uint32_t parts, const std::string &config_echo);

void write_features_binary(std::ostream &out, const std::vector<FeatureRecord> &records,
                           std::uint32_t parts, const std::string &config_echo);

struct FeatureFile {
    std::uint32_t parts = 0;
    std::size_t grid = 0;
    std::string config_echo;
    std::vector<FeatureRecord> records;
};

/// Throws FormatError on a bad magic, version or truncated payload.
[[nodiscard]] FeatureFile read_features_binary(std::istream &in);

} // namespace qpatch
