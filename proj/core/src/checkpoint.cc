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

#include "mmart/checkpoint.h"

#include "binary_io.h"
#include "mmart/errors.h"

namespace mmart {

namespace {
constexpr std::string_view kMagic = "MMCK";
constexpr std::uint8_t kMatrixBlock = 0;
constexpr std::uint8_t kTextBlock = 1;
}  // namespace

void Checkpoint::put(std::string name, Matrix value) {
  if (contains(name)) throw UsageError("duplicate checkpoint block: " + name);
  blocks_.push_back({std::move(name), std::move(value)});
}

void Checkpoint::put(std::string name, std::span<const double> value) {
  Matrix m(1, value.size());
  std::copy(value.begin(), value.end(), m.data().begin());
  put(std::move(name), std::move(m));
}

void Checkpoint::put_text(std::string name, std::string value) {
  if (contains(name)) throw UsageError("duplicate checkpoint block: " + name);
  blocks_.push_back({std::move(name), std::move(value)});
}

void Checkpoint::put_number(std::string name, double value) {
  put(std::move(name), Matrix(1, 1, value));
}

bool Checkpoint::contains(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return true;
  }
  return false;
}

const Checkpoint::Block& Checkpoint::find(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return b;
  }
  throw DataError("checkpoint block missing: " + std::string(name));
}

const Matrix& Checkpoint::matrix(std::string_view name) const {
  const auto* m = std::get_if<Matrix>(&find(name).value);
  if (m == nullptr) throw DataError("checkpoint block is not a matrix: " + std::string(name));
  return *m;
}

Vector Checkpoint::vector(std::string_view name) const {
  const auto& m = matrix(name);
  return Vector(m.data().begin(), m.data().end());
}

const std::string& Checkpoint::text(std::string_view name) const {
  const auto* s = std::get_if<std::string>(&find(name).value);
  if (s == nullptr) throw DataError("checkpoint block is not text: " + std::string(name));
  return *s;
}

double Checkpoint::number(std::string_view name) const {
  const auto& m = matrix(name);
  if (m.size() != 1) throw DataError("checkpoint block is not a scalar: " + std::string(name));
  return m.data()[0];
}

std::vector<std::string> Checkpoint::names() const {
  std::vector<std::string> out;
  for (const auto& b : blocks_) out.push_back(b.name);
  return out;
}

std::string Checkpoint::encode() const {
  std::string out;
  io::put_bytes(out, kMagic);
  io::put_u32(out, kVersion);
  io::put_u32(out, static_cast<std::uint32_t>(blocks_.size()));
  for (const auto& b : blocks_) {
    const bool is_matrix = std::holds_alternative<Matrix>(b.value);
    io::put_u8(out, is_matrix ? kMatrixBlock : kTextBlock);
    io::put_u32(out, static_cast<std::uint32_t>(b.name.size()));
    io::put_bytes(out, b.name);
    if (is_matrix) {
      const auto& m = std::get<Matrix>(b.value);
      io::put_u32(out, static_cast<std::uint32_t>(m.rows()));
      io::put_u32(out, static_cast<std::uint32_t>(m.cols()));
      for (double v : m.data()) io::put_f64(out, v);
    } else {
      const auto& s = std::get<std::string>(b.value);
      io::put_u32(out, static_cast<std::uint32_t>(s.size()));
      io::put_bytes(out, s);
    }
  }
  return out;
}

Checkpoint Checkpoint::decode(std::string_view bytes) {
  io::Reader in(bytes, "truncated checkpoint");
  if (in.remaining() < 4 || in.bytes(4) != kMagic) throw DataError("bad magic");
  if (in.u32() != kVersion) throw DataError("version mismatch");
  const std::uint32_t count = in.u32();
  Checkpoint out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint8_t kind = in.u8();
    std::string name(in.bytes(in.u32()));
    if (kind == kMatrixBlock) {
      const std::uint32_t rows = in.u32();
      const std::uint32_t cols = in.u32();
      if (static_cast<std::uint64_t>(rows) * cols * 8 > in.remaining()) {
        throw DataError("truncated checkpoint");
      }
      Matrix m(rows, cols);
      for (double& v : m.data()) v = in.f64();
      out.put(std::move(name), std::move(m));
    } else if (kind == kTextBlock) {
      out.put_text(std::move(name), std::string(in.bytes(in.u32())));
    } else {
      throw DataError("unknown checkpoint block kind " + std::to_string(kind));
    }
  }
  if (!in.at_end()) throw DataError("trailing bytes after checkpoint");
  return out;
}

void Checkpoint::save(const std::filesystem::path& path) const { io::write_file(path, encode()); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  return decode(io::read_file(path));
}

}  // namespace mmart
