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

#include "rra/attention_export.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "rra/errors.h"

namespace rra {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DataError("attention export: bad number '" + s + "'");
  }
  if (used != s.size()) throw DataError("attention export: bad number '" + s + "'");
  return v;
}

}  // namespace

AttentionTable read_attention(const std::filesystem::path& metrics_file) {
  std::ifstream in(metrics_file);
  if (!in) throw DataError("cannot open " + metrics_file.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty metrics file");
  const auto header = split_csv(line);
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("attn_", 0) == 0) cols.push_back(c);
  }
  if (cols.empty()) {
    throw NoAttentionError("metrics file has no attention columns: " +
                           metrics_file.string());
  }
  AttentionTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw DataError("metrics row has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    table.iterations.push_back(std::stoull(fields[0]));
    std::vector<double> row;
    row.reserve(cols.size());
    for (std::size_t c : cols) row.push_back(parse_double(fields[c]));
    table.weights.push_back(std::move(row));
  }
  return table;
}

void write_attention_csv(const AttentionTable& table, std::ostream& out) {
  out << "iteration";
  for (std::size_t k = 0; k < table.window(); ++k) out << ",attn_" << k;
  out << "\n" << std::setprecision(17);
  for (std::size_t r = 0; r < table.weights.size(); ++r) {
    out << table.iterations[r];
    for (double w : table.weights[r]) out << "," << w;
    out << "\n";
  }
}

AttentionTable export_attention(const std::filesystem::path& metrics_file,
                                const std::filesystem::path& out_file) {
  AttentionTable table = read_attention(metrics_file);
  std::ofstream out(out_file);
  if (!out) throw DataError("cannot write " + out_file.string());
  write_attention_csv(table, out);
  return table;
}

}  // namespace rra
