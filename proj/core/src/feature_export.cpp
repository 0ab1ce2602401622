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
#include "qpatch/feature_export.hpp"

#include "qpatch/error.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

namespace qpatch {
namespace {

constexpr std::array<char, 4> kMagic{'Q', 'P', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary feature export assumes a little-endian host");

template <class T> void put(std::ostream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof v);
}

template <class T> T get(std::istream &in) {
    T v{};
    if (!in.read(reinterpret_cast<char *>(&v), sizeof v)) {
        throw FormatError("truncated feature file");
    }
    return v;
}

std::vector<const Matrix *> selected(const FeatureRecord &r, std::uint32_t parts) {
    std::vector<const Matrix *> out;
    if (parts & kPartGamma) {
        out.push_back(&r.features.gamma);
    }
    if (parts & kPartQuantum) {
        out.push_back(&r.features.quantum_part);
    }
    if (parts & kPartMask) {
        out.push_back(&r.features.mask_part);
    }
    return out;
}

std::size_t grid_of(const std::vector<FeatureRecord> &records) {
    return records.empty() ? 0 : records.front().features.gamma.rows();
}

} // namespace

void write_features_csv(std::ostream &out, const std::vector<FeatureRecord> &records,
                        std::uint32_t parts, const std::string &config_echo) {
    const std::size_t cells = grid_of(records) * grid_of(records);
    out << "# qpatch reduced features v1\n";
    out << "# config: " << config_echo << "\n";
    out << "index,source_index,class_id";
    for (const char *name : {"gamma", "quantum", "mask"}) {
        const std::uint32_t bit = name[0] == 'g' ? kPartGamma
                                  : name[0] == 'q' ? kPartQuantum
                                                   : kPartMask;
        if (parts & bit) {
            for (std::size_t i = 0; i < cells; ++i) {
                out << ',' << name << '_' << i;
            }
        }
    }
    out << '\n';
    char buf[32];
    for (std::size_t n = 0; n < records.size(); ++n) {
        const auto &r = records[n];
        out << n << ',' << r.source_index << ',' << r.class_id;
        for (const Matrix *m : selected(r, parts)) {
            for (double v : m->data()) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << ',' << buf;
            }
        }
        out << '\n';
    }
}

void write_features_binary(std::ostream &out, const std::vector<FeatureRecord> &records,
                           std::uint32_t parts, const std::string &config_echo) {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(grid_of(records)));
    put<std::uint32_t>(out, parts);
    put<std::uint64_t>(out, records.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(config_echo.size()));
    out.write(config_echo.data(), static_cast<std::streamsize>(config_echo.size()));
    for (const auto &r : records) {
        put<std::uint64_t>(out, r.source_index);
        put<std::int32_t>(out, r.class_id);
        for (const Matrix *m : selected(r, parts)) {
            for (double v : m->data()) {
                put<double>(out, v);
            }
        }
    }
}

FeatureFile read_features_binary(std::istream &in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw FormatError("not a QPRF feature file");
    }
    if (get<std::uint32_t>(in) != kVersion) {
        throw FormatError("unsupported QPRF version");
    }
    FeatureFile f;
    f.grid = get<std::uint32_t>(in);
    f.parts = get<std::uint32_t>(in);
    const auto count = get<std::uint64_t>(in);
    const auto echo_len = get<std::uint32_t>(in);
    f.config_echo.resize(echo_len);
    if (!in.read(f.config_echo.data(), echo_len)) {
        throw FormatError("truncated feature file header");
    }
    for (std::uint64_t n = 0; n < count; ++n) {
        FeatureRecord r;
        r.source_index = get<std::uint64_t>(in);
        r.class_id = get<std::int32_t>(in);
        for (auto [bit, target] : {std::pair{kPartGamma, &r.features.gamma},
                                   std::pair{kPartQuantum, &r.features.quantum_part},
                                   std::pair{kPartMask, &r.features.mask_part}}) {
            if (!(f.parts & bit)) {
                continue;
            }
            *target = Matrix(f.grid, f.grid);
            for (auto &v : target->data()) {
                v = get<double>(in);
            }
        }
        f.records.push_back(std::move(r));
    }
    return f;
}

} // namespace qpatch
