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
#include "qpatch/data.hpp"

#include "qpatch/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>

namespace qpatch {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t at) {
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
           (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path locate(const std::filesystem::path &dir,
                             const std::string &stem) {
    for (const auto &candidate : {dir / (stem + ".gz"), dir / stem}) {
        if (std::filesystem::exists(candidate)) {
            return candidate;
        }
    }
    throw DataError("missing " + stem + "[.gz] in " + dir.string());
}

} // namespace

const char *to_string(Split split) noexcept {
    return split == Split::Train ? "train" : "test";
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    // 15 window bits + 16: gzip wrapper only
    if (inflateInit2(&zs, 15 + 16) != Z_OK) {
        throw FormatError("zlib initialisation failed");
    }
    zs.next_in = const_cast<Bytef *>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());

    std::vector<std::uint8_t> out;
    std::array<std::uint8_t, 1 << 16> chunk{};
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = chunk.data();
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw FormatError("corrupt or truncated gzip stream");
        }
        out.insert(out.end(), chunk.begin(),
                   chunk.begin() + (chunk.size() - zs.avail_out));
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw FormatError("truncated gzip stream");
        }
    }
    inflateEnd(&zs);
    return out;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        const auto inflated = gunzip(bytes);
        return parse_idx(inflated);
    }
    if (bytes.size() < 4) {
        throw FormatError("IDX file shorter than its magic number");
    }
    IdxTensor t;
    t.magic = read_be32(bytes, 0);
    std::size_t rank = 0;
    if (t.magic == kIdxImageMagic) {
        rank = 3;
    } else if (t.magic == kIdxLabelMagic) {
        rank = 1;
    } else {
        throw FormatError("unsupported IDX magic " + std::to_string(t.magic));
    }
    const std::size_t header = 4 + 4 * rank;
    if (bytes.size() < header) {
        throw FormatError("truncated IDX header");
    }
    std::size_t payload = 1;
    for (std::size_t d = 0; d < rank; ++d) {
        t.dims.push_back(read_be32(bytes, 4 + 4 * d));
        payload *= t.dims.back();
    }
    if (bytes.size() - header < payload) {
        throw FormatError("truncated IDX payload: expected " +
                          std::to_string(payload) + " bytes, found " +
                          std::to_string(bytes.size() - header));
    }
    t.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                  bytes.begin() + static_cast<std::ptrdiff_t>(header + payload));
    return t;
}

RawDataset make_dataset(IdxTensor images, IdxTensor labels, Split split) {
    if (images.magic != kIdxImageMagic || labels.magic != kIdxLabelMagic) {
        throw FormatError("expected an image tensor and a label tensor");
    }
    if (images.dims[0] != labels.dims[0]) {
        throw FormatError("image count " + std::to_string(images.dims[0]) +
                          " does not match label count " +
                          std::to_string(labels.dims[0]));
    }
    RawDataset ds;
    ds.rows = images.dims[1];
    ds.cols = images.dims[2];
    ds.pixels = std::move(images.data);
    ds.labels = std::move(labels.data);
    ds.split = split;
    return ds;
}

RawDataset load_split(const std::filesystem::path &dir, Split split) {
    const std::string prefix = split == Split::Train ? "train" : "t10k";
    auto images = parse_idx(read_file(locate(dir, prefix + "-images-idx3-ubyte")));
    auto labels = parse_idx(read_file(locate(dir, prefix + "-labels-idx1-ubyte")));
    return make_dataset(std::move(images), std::move(labels), split);
}

Matrix pad_and_scale(std::span<const std::uint8_t> pixels, std::size_t rows,
                     std::size_t cols, std::size_t padded_side) {
    if (padded_side < rows || padded_side < cols) {
        throw ConfigurationError("padded side smaller than the raw image");
    }
    if (pixels.size() != rows * cols) {
        throw InvalidInputError("pixel buffer does not match image shape");
    }
    Matrix img(padded_side, padded_side);
    const std::size_t top = (padded_side - rows) / 2;
    const std::size_t left = (padded_side - cols) / 2;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            img(top + r, left + c) = pixels[r * cols + c] / 255.0;
        }
    }
    return img;
}

std::vector<PreparedSample> prepare(const RawDataset &raw, ClassPair classes,
                                    const PrepareOptions &options) {
    const auto [first, second] = classes;
    if (first == second || first < 0 || first > 9 || second < 0 || second > 9) {
        throw ConfigurationError("class pair must be two distinct ids in 0-9");
    }
    std::vector<PreparedSample> out;
    std::size_t kept_first = 0;
    std::size_t kept_second = 0;
    const std::size_t limit = options.per_class_limit;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const int label = raw.labels[i];
        std::size_t *counter = nullptr;
        if (label == first) {
            counter = &kept_first;
        } else if (label == second) {
            counter = &kept_second;
        } else {
            continue;
        }
        if (limit != 0 && *counter >= limit) {
            continue;
        }
        ++*counter;
        PreparedSample s;
        s.image = pad_and_scale(raw.image(i), raw.rows, raw.cols,
                                options.padded_side);
        s.label_onehot = label == first ? std::array{1.0, 0.0}
                                        : std::array{0.0, 1.0};
        s.class_id = label;
        s.source_index = i;
        out.push_back(std::move(s));
    }
    if (kept_first == 0 || kept_second == 0) {
        throw DataError(std::string("no ") + to_string(raw.split) +
                        " samples for class " +
                        std::to_string(kept_first == 0 ? first : second));
    }
    return out;
}

BatchIterator::BatchIterator(std::size_t n_samples, std::size_t batch_size,
                             std::uint64_t seed)
    : n_samples_(n_samples), batch_size_(batch_size), rng_(seed),
      order_(n_samples) {
    if (batch_size == 0) {
        throw ConfigurationError("batch size must be at least 1");
    }
    if (batch_size > n_samples) {
        throw ConfigurationError("batch size " + std::to_string(batch_size) +
                                 " exceeds dataset size " +
                                 std::to_string(n_samples));
    }
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    reshuffle();
}

void BatchIterator::reshuffle() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::shuffle(order_.begin(), order_.end(), rng_);
    cursor_ = 0;
}

std::vector<std::size_t> BatchIterator::next() {
    if (cursor_ + batch_size_ > n_samples_) {
        reshuffle();
        ++epoch_;
    }
    std::vector<std::size_t> batch(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                   order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + batch_size_));
    cursor_ += batch_size_;
    return batch;
}

} // namespace qpatch
