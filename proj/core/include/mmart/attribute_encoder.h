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

#ifndef MMART_ATTRIBUTE_ENCODER_H_
#define MMART_ATTRIBUTE_ENCODER_H_

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmart/corpus.h"
#include "mmart/nn_core.h"

namespace mmart {

// One-hot encoder over the train-split labels of one attribute. Labels never
// seen in train encode to the all-zeros vector.
class AttributeEncoder {
 public:
  AttributeEncoder(Attribute attribute, std::vector<std::string> labels);

  static AttributeEncoder build(const Corpus& corpus, Attribute attribute);

  Attribute attribute() const { return attribute_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t cardinality() const { return labels_.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  Vector encode_label(std::string_view label) const;
  Vector encode(const Painting& painting) const;
  SparseVector encode_sparse(std::string_view label) const;

  // One label per line.
  void save(const std::filesystem::path& path) const;
  static AttributeEncoder load(const std::filesystem::path& path, Attribute attribute);

  bool operator==(const AttributeEncoder& o) const {
    return attribute_ == o.attribute_ && labels_ == o.labels_;
  }

 private:
  Attribute attribute_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mmart

#endif  // MMART_ATTRIBUTE_ENCODER_H_
