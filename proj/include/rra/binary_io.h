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

#ifndef RRA_BINARY_IO_H_
#define RRA_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "rra/errors.h"

namespace rra {

static_assert(std::endian::native == std::endian::little,
              "binary containers assume a little-endian host");

// Append-only little-endian byte buffer.
class ByteWriter {
 public:
  void put_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  void put_u32(std::uint32_t v) { put_bytes(&v, sizeof v); }
  void put_u64(std::uint64_t v) { put_bytes(&v, sizeof v); }
  void put_i32(std::int32_t v) { put_bytes(&v, sizeof v); }
  void put_f64(double v) { put_bytes(&v, sizeof v); }
  void put_string(std::string_view s) {
    put_u32(static_cast<std::uint32_t>(s.size()));
    put_bytes(s.data(), s.size());
  }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

// Bounds-checked reader; running past the end throws TruncatedError.
class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size)
      : data_(data), size_(size) {}

  void get_bytes(void* p, std::size_t n) {
    if (n > size_ - pos_) {
      throw TruncatedError("unexpected end of data at byte " +
                           std::to_string(pos_));
    }
    std::memcpy(p, data_ + pos_, n);
    pos_ += n;
  }
  std::uint32_t get_u32() { std::uint32_t v; get_bytes(&v, sizeof v); return v; }
  std::uint64_t get_u64() { std::uint64_t v; get_bytes(&v, sizeof v); return v; }
  std::int32_t get_i32() { std::int32_t v; get_bytes(&v, sizeof v); return v; }
  double get_f64() { double v; get_bytes(&v, sizeof v); return v; }
  std::string get_string() {
    const std::uint32_t n = get_u32();
    std::string s(n, '\0');
    get_bytes(s.data(), n);
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes);

}  // namespace rra

#endif  // RRA_BINARY_IO_H_
