// Copyright 2026 The mmart Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMART_CHECKPOINT_H_
#define MMART_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmart/nn_core.h"

namespace mmart {

// Named-block model checkpoint ("MMCK").
//
// Layout, all integers little-endian:
//   "MMCK" | u32 version=1 | u32 block_count
//   per block: u8 kind | u32 name_len | name bytes | payload
//     kind 0 (matrix): u32 rows | u32 cols | rows*cols f64
//     kind 1 (text):   u32 len  | UTF-8 bytes
// Blocks keep insertion order, so encoding is deterministic.
class Checkpoint {
 public:
  static constexpr std::uint32_t kVersion = 1;

  void put(std::string name, Matrix value);
  void put(std::string name, std::span<const double> value);  // stored as 1 x n
  void put_text(std::string name, std::string value);
  void put_number(std::string name, double value);

  bool contains(std::string_view name) const;
  const Matrix& matrix(std::string_view name) const;
  Vector vector(std::string_view name) const;
  const std::string& text(std::string_view name) const;
  double number(std::string_view name) const;

  std::vector<std::string> names() const;

  std::string encode() const;
  static Checkpoint decode(std::string_view bytes);

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

 private:
  struct Block {
    std::string name;
    std::variant<Matrix, std::string> value;
  };
  const Block& find(std::string_view name) const;

  std::vector<Block> blocks_;
};

}  // namespace mmart

#endif  // MMART_CHECKPOINT_H_
