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

#ifndef RRA_TEXT_H_
#define RRA_TEXT_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rra/model.h"
#include "rra/rng.h"

namespace rra {

// Lowercases ASCII and splits on every non-alphanumeric character.
std::vector<std::string> tokenize(std::string_view text);

// Token to id map with two reserved ids. The `max_size` most frequent
// tokens are kept (ties broken lexicographically) and numbered from 2 in
// that order; everything else encodes to kUnk.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t max_size = 10000);

  int id(std::string_view token) const;
  std::vector<int> encode(std::string_view text) const;
  // Total number of ids, reserved ones included.
  std::size_t size() const { return tokens_.size(); }
  const std::string& token(int id) const { return tokens_.at(id); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

struct TokenSequence {
  std::vector<int> ids;
  int label = 0;
};

// Ids used by the long-range task.
inline constexpr int kSignalNegative = 2;
inline constexpr int kSignalPositive = 3;
inline constexpr int kFirstDistractor = 4;

// Sequences of `length` distractor tokens drawn uniformly from
// [4, vocab). One signal token, whose identity is the label, sits at a
// uniform position at least `gap` steps from the end.
std::vector<TokenSequence> gen_longrange_text(std::size_t count,
                                              std::size_t length,
                                              std::size_t gap,
                                              std::size_t vocab, Rng& rng);

// Reads "label<TAB>text" lines (label 0 or 1).
std::vector<std::pair<int, std::string>> read_labeled_text(
    const std::filesystem::path& path);

// Encodes and truncates to `max_length` tokens (keeping the end).
std::vector<TokenSequence> encode_labeled_text(
    const std::vector<std::pair<int, std::string>>& docs,
    const Vocabulary& vocab, std::size_t max_length);

// Pads to the longest sequence with kPad and fills the mask.
Batch make_token_batch(std::span<const TokenSequence> data,
                       std::span<const std::size_t> indices);

}  // namespace rra

#endif  // RRA_TEXT_H_
