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

#ifndef RRA_ATTENTION_EXPORT_H_
#define RRA_ATTENTION_EXPORT_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace rra {

struct AttentionTable {
  std::vector<unsigned long long> iterations;
  std::vector<std::vector<double>> weights;  // weights[row][k], k=0 is h_{t-2}
  std::size_t window() const { return weights.empty() ? 0 : weights[0].size(); }
};

// Reads the attn_* columns of a metrics CSV. Throws NoAttentionError when the
// file has none (an LSTM run) and DataError on malformed rows.
AttentionTable read_attention(const std::filesystem::path& metrics_file);

// CSV: iteration,attn_0..attn_{K-1}, one row per logged iteration.
void write_attention_csv(const AttentionTable& table, std::ostream& out);

// read_attention + write_attention_csv into `out_file`.
AttentionTable export_attention(const std::filesystem::path& metrics_file,
                                const std::filesystem::path& out_file);

}  // namespace rra

#endif  // RRA_ATTENTION_EXPORT_H_
