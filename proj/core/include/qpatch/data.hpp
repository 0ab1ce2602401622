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
 * Fashion-MNIST ingestion: IDX parsing (optionally gzip-compressed),
 * class filtering, scaling, zero padding and seeded batching.
 */
#pragma once

#include "qpatch/matrix.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace qpatch {

inline constexpr std::uint32_t kIdxLabelMagic = 2049;
inline constexpr std::uint32_t kIdxImageMagic = 2051;

/// Decoded IDX container: big-endian header, unsigned-byte payload.
struct IdxTensor {
    std::uint32_t magic = 0;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;
};

/// Inflates gzip data; throws FormatError on a corrupt stream.
[[nodiscard]] std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes);

/// Parses an IDX image (2051, 3 dims) or label (2049, 1 dim) file. Input
/// starting with the gzip magic 1f 8b is inflated first.
[[nodiscard]] IdxTensor parse_idx(std::span<const std::uint8_t> bytes);

enum class Split { Train, Test };

[[nodiscard]] const char *to_string(Split split) noexcept;

struct RawDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> pixels; ///< count * rows * cols, row-major
    std::vector<std::uint8_t> labels;
    Split split = Split::Train;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::span<const std::uint8_t> image(std::size_t i) const {
        return {pixels.data() + i * rows * cols, rows * cols};
    }
};

/// Pairs an image IDX tensor with a label IDX tensor.
[[nodiscard]] RawDataset make_dataset(IdxTensor images, IdxTensor labels,
                                      Split split);

/// Loads one split from `dir` using the published file names, with or
/// without a .gz suffix. Throws DataError if files are missing.
[[nodiscard]] RawDataset load_split(const std::filesystem::path &dir, Split split);

using ClassPair = std::pair<int, int>;

struct PreparedSample {
    Matrix image;                      ///< padded side x side, values in [0, 1]
    std::array<double, 2> label_onehot{};
    int class_id = 0;                  ///< original Fashion-MNIST label
    std::size_t source_index = 0;      ///< index into the raw split

    [[nodiscard]] std::size_t label_index() const noexcept {
        return label_onehot[0] == 1.0 ? 0 : 1;
    }
};

struct PrepareOptions {
    std::size_t padded_side = 32;
    /// Keep at most this many samples of each class, in file order; 0 keeps all.
    std::size_t per_class_limit = 0;
};

/**
 * @brief Filters to two classes, scales pixels by 1/255 and zero-pads
 * centrally to `padded_side`.
 *
 * One-hot index 0 is `classes.first`. Throws DataError if the result would
 * miss either class.
 */
[[nodiscard]] std::vector<PreparedSample> prepare(const RawDataset &raw,
                                                  ClassPair classes,
                                                  const PrepareOptions &options = {});

/// Single-sample preparation, used by prepare() and by synthetic tests.
[[nodiscard]] Matrix pad_and_scale(std::span<const std::uint8_t> pixels,
                                   std::size_t rows, std::size_t cols,
                                   std::size_t padded_side);

/**
 * @brief Seeded uniform batches without replacement.
 *
 * Every epoch draws a fresh permutation of [0, n) and cuts it into
 * floor(n / batch_size) batches; the remainder of the permutation is
 * dropped.
 */
class BatchIterator {
  public:
    BatchIterator(std::size_t n_samples, std::size_t batch_size,
                  std::uint64_t seed);

    [[nodiscard]] std::size_t batches_per_epoch() const noexcept {
        return n_samples_ / batch_size_;
    }
    [[nodiscard]] std::size_t epoch() const noexcept { return epoch_; }

    /// Indices of the next batch; advances to the next epoch as needed.
    [[nodiscard]] std::vector<std::size_t> next();

  private:
    void reshuffle();

    std::size_t n_samples_;
    std::size_t batch_size_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    std::size_t epoch_ = 0;
};

} // namespace qpatch
