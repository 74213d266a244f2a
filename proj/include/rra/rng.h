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

#ifndef RRA_RNG_H_
#define RRA_RNG_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace rra {

// Counter-based generator: draw n is a pure function of (key, n), so a
// stream can be split into independent named substreams without sharing
// state. Identical seeds give identical sequences on every platform for the
// integer and uniform draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on the open interval (lo, hi).
  double uniform_open(double lo, double hi);
  double normal();
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Independent child streams. The parent is not advanced.
  Rng split(std::string_view tag) const;
  Rng split(std::uint64_t index) const;

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  static Rng from_key(std::uint64_t seed, std::uint64_t key);

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rra

#endif  // RRA_RNG_H_
