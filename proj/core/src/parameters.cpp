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
#include "qpatch/parameters.hpp"

#include "qpatch/error.hpp"

#include <algorithm>

namespace qpatch {

std::size_t ParameterSet::add_group(std::string name, std::size_t size,
                                    bool trainable, double init) {
    if (find_group(name)) {
        throw ConfigurationError("duplicate parameter group '" + name + "'");
    }
    groups_.push_back(
        ParameterGroup{std::move(name), std::vector<double>(size, init),
                       trainable});
    return groups_.size() - 1;
}

const ParameterGroup &ParameterSet::group(std::size_t g) const {
    if (g >= groups_.size()) {
        throw ConfigurationError("parameter group index out of range");
    }
    return groups_[g];
}

ParameterGroup &ParameterSet::group(std::size_t g) {
    if (g >= groups_.size()) {
        throw ConfigurationError("parameter group index out of range");
    }
    return groups_[g];
}

std::optional<std::size_t>
ParameterSet::find_group(std::string_view name) const {
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (groups_[g].name == name) {
            return g;
        }
    }
    return std::nullopt;
}

bool ParameterSet::contains(ParamRef ref) const noexcept {
    return ref.group < groups_.size() &&
           ref.index < groups_[ref.group].values.size();
}

double ParameterSet::value(ParamRef ref) const {
    if (!contains(ref)) {
        throw ConfigurationError("unresolvable parameter slot (" +
                                 std::to_string(ref.group) + ", " +
                                 std::to_string(ref.index) + ")");
    }
    return groups_[ref.group].values[ref.index];
}

void ParameterSet::set_value(ParamRef ref, double v) {
    if (!contains(ref)) {
        throw ConfigurationError("unresolvable parameter slot");
    }
    groups_[ref.group].values[ref.index] = v;
}

bool ParameterSet::is_trainable(ParamRef ref) const {
    return group(ref.group).trainable;
}

std::size_t ParameterSet::total_trainable() const noexcept {
    std::size_t n = 0;
    for (const auto &g : groups_) {
        if (g.trainable) {
            n += g.values.size();
        }
    }
    return n;
}

std::size_t ParameterSet::total_size() const noexcept {
    std::size_t n = 0;
    for (const auto &g : groups_) {
        n += g.values.size();
    }
    return n;
}

std::optional<std::size_t> ParameterSet::flat_index(ParamRef ref) const {
    if (!contains(ref) || !groups_[ref.group].trainable) {
        return std::nullopt;
    }
    std::size_t offset = 0;
    for (std::size_t g = 0; g < ref.group; ++g) {
        if (groups_[g].trainable) {
            offset += groups_[g].values.size();
        }
    }
    return offset + ref.index;
}

std::vector<double> ParameterSet::trainable_values() const {
    std::vector<double> flat;
    flat.reserve(total_trainable());
    for (const auto &g : groups_) {
        if (g.trainable) {
            flat.insert(flat.end(), g.values.begin(), g.values.end());
        }
    }
    return flat;
}

void ParameterSet::set_trainable_values(std::span<const double> flat) {
    if (flat.size() != total_trainable()) {
        throw ContractError("trainable vector has " +
                            std::to_string(flat.size()) + " entries, expected " +
                            std::to_string(total_trainable()));
    }
    auto it = flat.begin();
    for (auto &g : groups_) {
        if (g.trainable) {
            std::copy_n(it, g.values.size(), g.values.begin());
            it += static_cast<std::ptrdiff_t>(g.values.size());
        }
    }
}

} // namespace qpatch
