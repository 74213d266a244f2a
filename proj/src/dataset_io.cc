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

#include "rra/dataset_io.h"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>

#include "rra/binary_io.h"
#include "rra/errors.h"

namespace rra {

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path);
}

namespace {

constexpr char kMagic[8] = {'R', 'R', 'A', 'D', 'A', 'T', 'A', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kAddingKind = 1;
constexpr std::uint32_t kTokenKind = 2;

ByteWriter header(std::uint32_t kind, std::size_t count) {
  ByteWriter w;
  w.put_bytes(kMagic, sizeof kMagic);
  w.put_u32(kVersion);
  w.put_u32(kind);
  w.put_u64(count);
  return w;
}

std::uint64_t read_header(ByteReader& r, std::uint32_t kind,
                          const std::filesystem::path& path) {
  char magic[8];
  r.get_bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw BadMagicError(path.string() + ": not a dataset container");
  }
  const std::uint32_t version = r.get_u32();
  if (version != kVersion) {
    throw VersionError(path.string() + ": dataset version " +
                       std::to_string(version) + " unsupported");
  }
  if (r.get_u32() != kind) {
    throw FormatError(path.string() + ": dataset holds a different task");
  }
  return r.get_u64();
}

}  // namespace

void write_adding_dataset(const std::filesystem::path& path,
                          std::span<const AddingExample> data) {
  ByteWriter w = header(kAddingKind, data.size());
  for (const AddingExample& ex : data) {
    w.put_u64(ex.values.size());
    for (double v : ex.values) w.put_f64(v);
    w.put_bytes(ex.markers.data(), ex.markers.size());
    w.put_f64(ex.target);
  }
  write_binary_file(path.string(), w.bytes());
}

std::vector<AddingExample> read_adding_dataset(
    const std::filesystem::path& path) {
  const auto bytes = read_binary_file(path.string());
  ByteReader r(bytes.data(), bytes.size());
  const std::uint64_t count = read_header(r, kAddingKind, path);
  std::vector<AddingExample> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    AddingExample ex;
    const std::uint64_t length = r.get_u64();
    if (length > r.remaining()) {
      throw TruncatedError(path.string() + ": record longer than file");
    }
    ex.values.resize(length);
    for (double& v : ex.values) v = r.get_f64();
    ex.markers.resize(length);
    r.get_bytes(ex.markers.data(), length);
    ex.target = r.get_f64();
    out.push_back(std::move(ex));
  }
  return out;
}

void write_token_dataset(const std::filesystem::path& path,
                         std::span<const TokenSequence> data) {
  ByteWriter w = header(kTokenKind, data.size());
  for (const TokenSequence& seq : data) {
    w.put_u64(seq.ids.size());
    for (int id : seq.ids) w.put_i32(id);
    w.put_i32(seq.label);
  }
  write_binary_file(path.string(), w.bytes());
}

std::vector<TokenSequence> read_token_dataset(
    const std::filesystem::path& path) {
  const auto bytes = read_binary_file(path.string());
  ByteReader r(bytes.data(), bytes.size());
  const std::uint64_t count = read_header(r, kTokenKind, path);
  std::vector<TokenSequence> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    TokenSequence seq;
    const std::uint64_t length = r.get_u64();
    if (length > r.remaining()) {
      throw TruncatedError(path.string() + ": record longer than file");
    }
    seq.ids.resize(length);
    for (int& id : seq.ids) id = r.get_i32();
    seq.label = r.get_i32();
    out.push_back(std::move(seq));
  }
  return out;
}

void write_adding_csv(std::ostream& os, std::span<const AddingExample> data) {
  os << "values,markers,target\n" << std::setprecision(17);
  for (const AddingExample& ex : data) {
    for (std::size_t t = 0; t < ex.values.size(); ++t) {
      os << (t ? ";" : "") << ex.values[t];
    }
    os << ",";
    for (std::size_t t = 0; t < ex.markers.size(); ++t) {
      os << (t ? ";" : "") << int{ex.markers[t]};
    }
    os << "," << ex.target << "\n";
  }
}

void write_token_csv(std::ostream& os, std::span<const TokenSequence> data) {
  os << "tokens,label\n";
  for (const TokenSequence& seq : data) {
    for (std::size_t t = 0; t < seq.ids.size(); ++t) {
      os << (t ? ";" : "") << seq.ids[t];
    }
    os << "," << seq.label << "\n";
  }
}

}  // namespace rra
