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

#include "binary_io.h"

#include <bit>
#include <fstream>
#include <sstream>

#include "mmart/errors.h"

namespace mmart::io {

namespace {

template <typename U>
void put_le(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

template <typename U>
U get_le(std::string_view bytes) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    v |= static_cast<U>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  }
  return v;
}

}  // namespace

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }
void put_u32(std::string& out, std::uint32_t v) { put_le(out, v); }
void put_f32(std::string& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
void put_bytes(std::string& out, std::string_view bytes) { out.append(bytes); }

void Reader::need(std::size_t n) {
  if (buffer_.size() - pos_ < n) throw DataError(truncated_);
}

std::uint8_t Reader::u8() {
  need(1);
  return static_cast<std::uint8_t>(buffer_[pos_++]);
}

std::uint32_t Reader::u32() {
  need(4);
  auto v = get_le<std::uint32_t>(buffer_.substr(pos_, 4));
  pos_ += 4;
  return v;
}

float Reader::f32() { return std::bit_cast<float>(u32()); }

double Reader::f64() {
  need(8);
  auto v = get_le<std::uint64_t>(buffer_.substr(pos_, 8));
  pos_ += 8;
  return std::bit_cast<double>(v);
}

std::string_view Reader::bytes(std::size_t n) {
  need(n);
  auto v = buffer_.substr(pos_, n);
  pos_ += n;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace mmart::io
