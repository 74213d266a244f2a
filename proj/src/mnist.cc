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

#include "rra/mnist.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "rra/errors.h"

namespace rra {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes,
                        std::size_t offset, const std::filesystem::path& path) {
  if (offset + 4 > bytes.size()) {
    throw TruncatedError(path.string() + ": truncated header");
  }
  return (std::uint32_t{bytes[offset]} << 24) |
         (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) |
         std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

void check_magic(std::uint32_t magic, std::uint32_t expected,
                 const std::filesystem::path& path) {
  if (magic != expected) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "bad magic 0x%08x (expected 0x%08x)",
                  magic, expected);
    throw BadMagicError(path.string() + ": " + buf);
  }
}

}  // namespace

MnistSet load_mnist_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);

  check_magic(read_be32(images, 0, images_path), kIdxImageMagic, images_path);
  const std::size_t count = read_be32(images, 4, images_path);
  MnistSet set;
  set.rows = read_be32(images, 8, images_path);
  set.cols = read_be32(images, 12, images_path);
  const std::size_t payload = count * set.rows * set.cols;
  if (images.size() < 16 + payload) {
    throw TruncatedError(images_path.string() + ": expected " +
                         std::to_string(payload) + " pixel bytes, found " +
                         std::to_string(images.size() - 16));
  }

  check_magic(read_be32(labels, 0, labels_path), kIdxLabelMagic, labels_path);
  const std::size_t label_count = read_be32(labels, 4, labels_path);
  if (labels.size() < 8 + label_count) {
    throw TruncatedError(labels_path.string() + ": expected " +
                         std::to_string(label_count) + " labels, found " +
                         std::to_string(labels.size() - 8));
  }
  if (label_count != count) {
    throw CountMismatchError(std::to_string(count) + " images but " +
                             std::to_string(label_count) + " labels");
  }
  set.pixels.assign(images.begin() + 16, images.begin() + 16 + payload);
  set.labels.assign(labels.begin() + 8, labels.begin() + 8 + label_count);
  return set;
}

void write_mnist_idx(const MnistSet& set,
                     const std::filesystem::path& images_path,
                     const std::filesystem::path& labels_path) {
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  if (!img || !lab) throw DataError("cannot write IDX files");
  put_be32(img, kIdxImageMagic);
  put_be32(img, static_cast<std::uint32_t>(set.size()));
  put_be32(img, static_cast<std::uint32_t>(set.rows));
  put_be32(img, static_cast<std::uint32_t>(set.cols));
  img.write(reinterpret_cast<const char*>(set.pixels.data()),
            static_cast<std::streamsize>(set.pixels.size()));
  put_be32(lab, kIdxLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(set.size()));
  lab.write(reinterpret_cast<const char*>(set.labels.data()),
            static_cast<std::streamsize>(set.labels.size()));
}

std::vector<std::uint32_t> make_permutation(std::uint64_t seed,
                                            std::size_t n) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng = Rng(seed).split("pixel-permutation");
  rng.shuffle(std::span<std::uint32_t>(perm));
  return perm;
}

std::vector<std::uint32_t> invert_permutation(
    std::span<const std::uint32_t> perm) {
  std::vector<std::uint32_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inv[perm[i]] = static_cast<std::uint32_t>(i);
  }
  return inv;
}

std::vector<double> apply_permutation(std::span<const double> values,
                                      std::span<const std::uint32_t> perm) {
  if (perm.size() != values.size()) {
    throw DimensionError("permutation of length " +
                         std::to_string(perm.size()) + " applied to " +
                         std::to_string(values.size()) + " values");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = values[perm[i]];
  return out;
}

PixelSequence pixels_to_sequence(std::span<const std::uint8_t> image,
                                 std::size_t rows, std::size_t cols, int label,
                                 std::span<const std::uint32_t> permutation,
                                 std::size_t downsample) {
  if (image.size() != rows * cols) {
    throw DimensionError("pixels_to_sequence: " + std::to_string(image.size()) +
                         " pixels for a " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " image");
  }
  if (downsample == 0 || rows % downsample != 0 || cols % downsample != 0) {
    throw ArgumentError("pixels_to_sequence: downsample factor " +
                        std::to_string(downsample) + " does not divide " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
  PixelSequence seq;
  seq.label = label;
  const std::size_t out_rows = rows / downsample;
  const std::size_t out_cols = cols / downsample;
  seq.pixels.resize(out_rows * out_cols);
  const double norm = 255.0 * static_cast<double>(downsample * downsample);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      unsigned total = 0;
      for (std::size_t dr = 0; dr < downsample; ++dr) {
        for (std::size_t dc = 0; dc < downsample; ++dc) {
          total += image[(r * downsample + dr) * cols + c * downsample + dc];
        }
      }
      seq.pixels[r * out_cols + c] = total / norm;
    }
  }
  if (!permutation.empty()) {
    seq.pixels = apply_permutation(seq.pixels, permutation);
  }
  return seq;
}

std::vector<std::size_t> stratified_subset(std::span<const std::uint8_t> labels,
                                           std::size_t count, Rng& rng,
                                           std::span<const std::size_t> exclude) {
  const std::set<std::size_t> skip(exclude.begin(), exclude.end());
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!skip.contains(i)) by_class[labels[i]].push_back(i);
  }
  for (auto& [label, idx] : by_class) {
    rng.shuffle(std::span<std::size_t>(idx));
  }
  // Round-robin over classes so counts differ by at most one where the
  // classes are large enough.
  std::vector<std::size_t> out;
  std::map<int, std::size_t> taken;
  while (out.size() < count) {
    bool progressed = false;
    for (auto& [label, idx] : by_class) {
      if (out.size() == count) break;
      std::size_t& k = taken[label];
      if (k < idx.size()) {
        out.push_back(idx[k++]);
        progressed = true;
      }
    }
    if (!progressed) {
      throw DataError("stratified_subset: asked for " + std::to_string(count) +
                      " examples, only " + std::to_string(out.size()) +
                      " available");
    }
  }
  rng.shuffle(std::span<std::size_t>(out));
  return out;
}

Batch make_pixel_batch(std::span<const PixelSequence> data,
                       std::span<const std::size_t> indices) {
  if (indices.empty()) throw ArgumentError("make_pixel_batch: no examples");
  const std::size_t length = data[indices[0]].pixels.size();
  const std::size_t n = indices.size();
  Batch batch;
  batch.steps.assign(length, Matrix(1, n));
  for (std::size_t b = 0; b < n; ++b) {
    const PixelSequence& seq = data[indices[b]];
    if (seq.pixels.size() != length) {
      throw DimensionError("make_pixel_batch: mixed sequence lengths");
    }
    for (std::size_t t = 0; t < length; ++t) batch.steps[t](0, b) = seq.pixels[t];
    batch.labels.push_back(seq.label);
  }
  return batch;
}

}  // namespace rra
