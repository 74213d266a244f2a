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

#ifndef RRA_DATASET_IO_H_
#define RRA_DATASET_IO_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include "rra/adding.h"
#include "rra/text.h"

namespace rra {

// Length-prefixed binary container for generated datasets:
//   "RRADATA\0", u32 version, u32 kind (1 adding, 2 tokens), u64 count,
//   then per record a u64 length followed by the payload. All integers and
//   doubles are little-endian.
void write_adding_dataset(const std::filesystem::path& path,
                          std::span<const AddingExample> data);
std::vector<AddingExample> read_adding_dataset(const std::filesystem::path& path);

void write_token_dataset(const std::filesystem::path& path,
                         std::span<const TokenSequence> data);
std::vector<TokenSequence> read_token_dataset(const std::filesystem::path& path);

// CSV with `;`-separated sequences: "values,markers,target".
void write_adding_csv(std::ostream& os, std::span<const AddingExample> data);
// "tokens,label".
void write_token_csv(std::ostream& os, std::span<const TokenSequence> data);

}  // namespace rra

#endif  // RRA_DATASET_IO_H_
