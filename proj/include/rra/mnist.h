// Copyright 2026 The RRA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RRA_MNIST_H_
#define RRA_MNIST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rra/model.h"
#include "rra/rng.h"

namespace rra {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// Images as raw bytes, row-major, one after another.
struct MnistSet {
  std::size_t rows = 28;
  std::size_t cols = 28;
  std::vector<std::uint8_t> pixels;
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const std::uint8_t> image(std::size_t i) const {
    return {pixels.data() + i * rows * cols, rows * cols};
  }
};

// Big-endian IDX files. Throws BadMagicError, TruncatedError or
// CountMismatchError.
MnistSet load_mnist_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);
void write_mnist_idx(const MnistSet& set,
                     const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path);

// Seeded shuffle of [0, n). Apply the same one to every image.
std::vector<std::uint32_t> make_permutation(std::uint64_t seed,
                                            std::size_t n = 784);
std::vector<std::uint32_t> invert_permutation(
    std::span<const std::uint32_t> perm);

struct PixelSequence {
  std::vector<double> pixels;
  int label = 0;
};

// Row-major flattening scaled by 1/255, optional `downsample` x
// `downsample` mean pooling, then optional reordering
// out[i] = in[permutation[i]].
PixelSequence pixels_to_sequence(std::span<const std::uint8_t> image,
                                 std::size_t rows, std::size_t cols, int label,
                                 std::span<const std::uint32_t> permutation = {},
                                 std::size_t downsample = 1);

// Reorders an existing sequence: out[i] = in[permutation[i]].
std::vector<double> apply_permutation(std::span<const double> values,
                                      std::span<const std::uint32_t> perm);

// Picks `count` indices with (as near as possible) equal counts per label,
// in a seeded order.
std::vector<std::size_t> stratified_subset(std::span<const std::uint8_t> labels,
                                           std::size_t count, Rng& rng,
                                           std::span<const std::size_t> exclude = {});

// One feature per step; labels are the digit classes.
Batch make_pixel_batch(std::span<const PixelSequence> data,
                       std::span<const std::size_t> indices);

}  // namespace rra

#endif  // RRA_MNIST_H_
