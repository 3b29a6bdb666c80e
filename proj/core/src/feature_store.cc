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

#include "mmart/feature_store.h"

#include <cmath>
#include <cstdio>

#include "binary_io.h"
#include "mmart/errors.h"

namespace mmart {

namespace {
constexpr std::string_view kMagic = "MMAF";
}  // namespace

FeatureFile::FeatureFile(std::uint32_t dim) : dim_(dim) {
  if (dim == 0) throw UsageError("feature dim must be positive");
}

void FeatureFile::add(std::string id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw DataError("feature record " + id + " has dim " + std::to_string(values.size()) +
                    ", expected " + std::to_string(dim_));
  }
  if (index_.contains(id)) throw DataError("duplicate feature id: " + id);
  const std::size_t offset = values_.size();
  for (double v : values) {
    const double rounded = static_cast<double>(static_cast<float>(v));
    if (!std::isfinite(rounded)) {
      values_.resize(offset);
      throw DataError("non-finite value");
    }
    values_.push_back(rounded);
  }
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
}

std::optional<std::span<const double>> FeatureFile::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

std::span<const double> FeatureFile::at(std::string_view id) const {
  auto v = find(id);
  if (!v) throw DataError("no feature record for " + std::string(id));
  return *v;
}

std::string encode_features(const FeatureFile& file) {
  std::string out;
  out.reserve(16 + file.size() * (4 + 16 + 4 * file.dim()));
  io::put_bytes(out, kMagic);
  io::put_u32(out, FeatureFile::kVersion);
  io::put_u32(out, static_cast<std::uint32_t>(file.size()));
  io::put_u32(out, file.dim());
  for (std::size_t i = 0; i < file.size(); ++i) {
    const auto& id = file.ids()[i];
    io::put_u32(out, static_cast<std::uint32_t>(id.size()));
    io::put_bytes(out, id);
    for (double v : file.row(i)) io::put_f32(out, static_cast<float>(v));
  }
  return out;
}

FeatureFile decode_features(std::string_view bytes) {
  io::Reader in(bytes, "truncated header");
  if (in.remaining() < 4 || in.bytes(4) != kMagic) throw DataError("bad magic");
  if (in.u32() != FeatureFile::kVersion) throw DataError("version mismatch");
  const std::uint32_t count = in.u32();
  const std::uint32_t dim = in.u32();
  if (dim == 0) throw DataError("feature dim must be positive");
  in.set_truncated_message("truncated record");

  FeatureFile file(dim);
  Vector values(dim);
  for (std::uint32_t r = 0; r < count; ++r) {
    std::string id(in.bytes(in.u32()));
    for (auto& v : values) {
      v = in.f32();
      if (!std::isfinite(v)) throw DataError("non-finite value");
    }
    file.add(std::move(id), values);
  }
  if (!in.at_end()) throw DataError("trailing bytes after last record");
  return file;
}

void write_features(const FeatureFile& file, const std::filesystem::path& path) {
  io::write_file(path, encode_features(file));
}

FeatureFile read_features(const std::filesystem::path& path) {
  return decode_features(io::read_file(path));
}

void export_features_tsv(const FeatureFile& file, const std::filesystem::path& path) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < file.size(); ++i) {
    out += file.ids()[i];
    out += '\t';
    bool first = true;
    for (double v : file.row(i)) {
      if (!first) out += ',';
      first = false;
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out += buf;
    }
    out += '\n';
  }
  io::write_file(path, out);
}

FeatureFile synthesize_features(const Corpus& corpus, const SyntheticFeatureConfig& config) {
  const auto labels = attribute_labels(corpus, config.attribute);
  if (config.dim < labels.size()) {
    throw UsageError("synthetic feature dim " + std::to_string(config.dim) +
                     " is smaller than the " + std::to_string(labels.size()) + " " +
                     std::string(to_string(config.attribute)) + " labels");
  }
  const std::size_t identity_dims = config.dim - labels.size();
  if (config.identity_scale > 0.0 && identity_dims == 0) {
    throw UsageError("identity_scale needs dim larger than the label count");
  }

  FeatureFile file(config.dim);
  Rng noise = Rng::stream(config.seed, "synth-features/noise");
  Rng identity = Rng::stream(config.seed, "synth-features/identity");
  Vector v(config.dim);
  for (const Painting& p : corpus.paintings()) {
    std::fill(v.begin(), v.end(), 0.0);
    const auto it = std::lower_bound(labels.begin(), labels.end(), p.attribute(config.attribute));
    if (it != labels.end() && *it == p.attribute(config.attribute)) {
      v[static_cast<std::size_t>(it - labels.begin())] = 1.0;
    }
    if (config.identity_scale > 0.0) {
      double sq = 0.0;
      Vector dir(identity_dims);
      for (double& d : dir) {
        d = identity.normal();
        sq += d * d;
      }
      const double scale = config.identity_scale / std::sqrt(sq);
      for (std::size_t k = 0; k < identity_dims; ++k) v[labels.size() + k] = dir[k] * scale;
    }
    if (config.noise_sigma > 0.0) {
      for (double& x : v) x += config.noise_sigma * noise.normal();
    }
    file.add(p.id, v);
  }
  return file;
}

std::vector<std::string> missing_ids(const Corpus& corpus, const FeatureFile& features,
                                     Split split) {
  std::vector<std::string> out;
  for (const Painting* p : corpus.split_paintings(split)) {
    if (!features.contains(p->id)) out.push_back(p->id);
  }
  return out;
}

}  // namespace mmart
