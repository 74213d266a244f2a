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

#include "rra/text.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "rra/errors.h"

namespace rra {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char ch : text) {
    if (std::isalnum(ch)) {
      current.push_back(static_cast<char>(std::tolower(ch)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             std::size_t max_size) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  // std::map iteration is lexicographic, so a stable sort by count keeps
  // ties in lexicographic order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size) ranked.resize(max_size);

  Vocabulary v;
  v.tokens_ = {"<pad>", "<unk>"};
  for (auto& [tok, count] : ranked) {
    v.ids_.emplace(tok, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(tok);
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::encode(std::string_view text) const {
  std::vector<int> ids;
  for (const auto& tok : tokenize(text)) ids.push_back(id(tok));
  return ids;
}

std::vector<TokenSequence> gen_longrange_text(std::size_t count,
                                              std::size_t length,
                                              std::size_t gap,
                                              std::size_t vocab, Rng& rng) {
  if (gap >= length) {
    throw ArgumentError("gen_longrange_text: gap " + std::to_string(gap) +
                        " must be smaller than length " +
                        std::to_string(length));
  }
  if (vocab <= static_cast<std::size_t>(kFirstDistractor)) {
    throw ArgumentError("gen_longrange_text: vocabulary of " +
                        std::to_string(vocab) + " leaves no distractors");
  }
  const std::size_t distractors = vocab - kFirstDistractor;
  std::vector<TokenSequence> out(count);
  for (TokenSequence& seq : out) {
    seq.ids.resize(length);
    for (int& id : seq.ids) {
      id = kFirstDistractor + static_cast<int>(rng.below(distractors));
    }
    seq.label = static_cast<int>(rng.below(2));
    const std::size_t pos = rng.below(length - gap);
    seq.ids[pos] = seq.label == 1 ? kSignalPositive : kSignalNegative;
  }
  return out;
}

std::vector<std::pair<int, std::string>> read_labeled_text(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::pair<int, std::string>> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected label<TAB>text");
    }
    const std::string label = line.substr(0, tab);
    if (label != "0" && label != "1") {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": label must be 0 or 1");
    }
    docs.emplace_back(label[0] - '0', line.substr(tab + 1));
  }
  return docs;
}

std::vector<TokenSequence> encode_labeled_text(
    const std::vector<std::pair<int, std::string>>& docs,
    const Vocabulary& vocab, std::size_t max_length) {
  std::vector<TokenSequence> out;
  out.reserve(docs.size());
  for (const auto& [label, text] : docs) {
    TokenSequence seq;
    seq.label = label;
    seq.ids = vocab.encode(text);
    if (max_length > 0 && seq.ids.size() > max_length) {
      seq.ids.erase(seq.ids.begin(),
                    seq.ids.end() - static_cast<std::ptrdiff_t>(max_length));
    }
    if (seq.ids.empty()) seq.ids.push_back(Vocabulary::kUnk);
    out.push_back(std::move(seq));
  }
  return out;
}

Batch make_token_batch(std::span<const TokenSequence> data,
                       std::span<const std::size_t> indices) {
  if (indices.empty()) throw ArgumentError("make_token_batch: no examples");
  std::size_t length = 0;
  for (std::size_t i : indices) length = std::max(length, data[i].ids.size());
  Batch batch;
  bool ragged = false;
  for (std::size_t i : indices) {
    const TokenSequence& seq = data[i];
    std::vector<int> ids = seq.ids;
    ragged |= ids.size() != length;
    ids.resize(length, Vocabulary::kPad);
    batch.tokens.push_back(std::move(ids));
    batch.labels.push_back(seq.label);
  }
  if (ragged) {
    for (std::size_t i : indices) {
      std::vector<std::uint8_t> m(length, 0);
      std::fill_n(m.begin(), data[i].ids.size(), 1);
      batch.mask.push_back(std::move(m));
    }
  }
  return batch;
}

}  // namespace rra
