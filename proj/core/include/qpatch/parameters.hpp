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
 * Named groups of real gate angles (or classical weights) that circuits bind
 * to through ParamRef slots.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qpatch {

/// Address of one scalar inside a ParameterSet.
struct ParamRef {
    std::size_t group = 0;
    std::size_t index = 0;

    bool operator==(const ParamRef &) const = default;
};

struct ParameterGroup {
    std::string name;
    std::vector<double> values;
    bool trainable = true;
};

/**
 * @brief Ordered collection of parameter groups.
 *
 * The trainable scalars have a canonical flat order: groups in insertion
 * order, values in index order, non-trainable groups skipped. Optimizer
 * state and gradients use that order.
 */
class ParameterSet {
  public:
    /// Appends a group and returns its index. Group names must be unique.
    std::size_t add_group(std::string name, std::size_t size, bool trainable,
                          double init = 0.0);

    [[nodiscard]] std::size_t group_count() const noexcept {
        return groups_.size();
    }
    [[nodiscard]] const ParameterGroup &group(std::size_t g) const;
    [[nodiscard]] ParameterGroup &group(std::size_t g);
    [[nodiscard]] std::optional<std::size_t>
    find_group(std::string_view name) const;
    [[nodiscard]] std::span<const ParameterGroup> groups() const noexcept {
        return groups_;
    }

    [[nodiscard]] bool contains(ParamRef ref) const noexcept;
    /// Throws ConfigurationError when the slot does not resolve.
    [[nodiscard]] double value(ParamRef ref) const;
    void set_value(ParamRef ref, double v);
    [[nodiscard]] bool is_trainable(ParamRef ref) const;

    [[nodiscard]] std::size_t total_trainable() const noexcept;
    [[nodiscard]] std::size_t total_size() const noexcept;

    /// Position of a trainable slot in the flat order, nullopt if frozen.
    [[nodiscard]] std::optional<std::size_t> flat_index(ParamRef ref) const;
    [[nodiscard]] std::vector<double> trainable_values() const;
    void set_trainable_values(std::span<const double> flat);

    bool operator==(const ParameterSet &) const = default;

  private:
    std::vector<ParameterGroup> groups_;
};

} // namespace qpatch
