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

#ifndef MMART_SRC_BINARY_IO_H_
#define MMART_SRC_BINARY_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>

namespace mmart::io {

// Little-endian encoders appending to a byte string.
void put_u8(std::string& out, std::uint8_t v);
void put_u32(std::string& out, std::uint32_t v);
void put_f32(std::string& out, float v);
void put_f64(std::string& out, double v);
void put_bytes(std::string& out, std::string_view bytes);

// Bounds-checked little-endian cursor. Every getter throws DataError with
// the configured message when the buffer is exhausted.
class Reader {
 public:
  Reader(std::string_view buffer, std::string truncated_message)
      : buffer_(buffer), truncated_(std::move(truncated_message)) {}

  std::uint8_t u8();
  std::uint32_t u32();
  float f32();
  double f64();
  std::string_view bytes(std::size_t n);

  bool at_end() const { return pos_ == buffer_.size(); }
  std::size_t remaining() const { return buffer_.size() - pos_; }
  void set_truncated_message(std::string message) { truncated_ = std::move(message); }

 private:
  void need(std::size_t n);

  std::string_view buffer_;
  std::size_t pos_ = 0;
  std::string truncated_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mmart::io

#endif  // MMART_SRC_BINARY_IO_H_
