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
//
// Per-painting dense feature vectors and their "MMAF" file format:
//
//   offset 0   "MMAF"
//   offset 4   u32 version (= 1)
//   offset 8   u32 record_count
//   offset 12  u32 dim
//   then per record:
//              u32 id byte length | UTF-8 id | dim x f32
//
// All integers and floats are little-endian. Values are held in memory as
// doubles that are exactly representable in f32, so read(write(x)) == x.

#ifndef MMART_FEATURE_STORE_H_
#define MMART_FEATURE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mmart/corpus.h"
#include "mmart/nn_core.h"

namespace mmart {

class FeatureFile {
 public:
  static constexpr std::uint32_t kVersion = 1;

  // dim must be positive.
  explicit FeatureFile(std::uint32_t dim);

  // Rounds each value to f32. Throws DataError on a dimension mismatch, a
  // duplicate id, or a non-finite value.
  void add(std::string id, std::span<const double> values);

  std::uint32_t version() const { return kVersion; }
  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  bool contains(std::string_view id) const { return index_.contains(std::string(id)); }
  std::optional<std::span<const double>> find(std::string_view id) const;
  std::span<const double> at(std::string_view id) const;  // throws DataError
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  bool operator==(const FeatureFile& o) const {
    return dim_ == o.dim_ && ids_ == o.ids_ && values_ == o.values_;
  }

 private:
  std::uint32_t dim_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

std::string encode_features(const FeatureFile& file);
// Throws DataError: "bad magic", "version mismatch", "truncated record",
// "non-finite value".
FeatureFile decode_features(std::string_view bytes);

void write_features(const FeatureFile& file, const std::filesystem::path& path);
FeatureFile read_features(const std::filesystem::path& path);

// Debug export: "id<TAB>v1,v2,..." per record.
void export_features_tsv(const FeatureFile& file, const std::filesystem::path& path);

struct SyntheticFeatureConfig {
  std::uint32_t dim = 64;
  Attribute attribute = Attribute::kType;
  double noise_sigma = 0.0;
  // Norm of a per-painting random direction written into the coordinates
  // past the label block. Zero keeps the pure label-plus-noise layout; a
  // positive value makes every painting's vector distinct, which image-side
  // retrieval needs when several paintings share a label.
  double identity_scale = 0.0;
  std::uint64_t seed = 0;
};

// Vector of painting i = e_{label(i)} + N(0, noise_sigma^2) per coordinate
// (+ optional identity component). Paintings whose label is unseen in train
// get noise only. Throws UsageError when dim is smaller than the number of
// train labels.
FeatureFile synthesize_features(const Corpus& corpus, const SyntheticFeatureConfig& config);

// Ids of the paintings in `split` that have no record in `features`.
std::vector<std::string> missing_ids(const Corpus& corpus, const FeatureFile& features,
                                     Split split);

}  // namespace mmart

#endif  // MMART_FEATURE_STORE_H_
