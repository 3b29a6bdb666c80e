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

#include "mmart/attribute_encoder.h"

#include "binary_io.h"
#include "mmart/errors.h"

namespace mmart {

AttributeEncoder::AttributeEncoder(Attribute attribute, std::vector<std::string> labels)
    : attribute_(attribute), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw DataError("duplicate attribute label: " + labels_[i]);
    }
  }
}

AttributeEncoder AttributeEncoder::build(const Corpus& corpus, Attribute attribute) {
  return AttributeEncoder(attribute, attribute_labels(corpus, attribute));
}

std::optional<std::size_t> AttributeEncoder::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vector AttributeEncoder::encode_label(std::string_view label) const {
  Vector out(labels_.size(), 0.0);
  if (auto idx = index_of(label)) out[*idx] = 1.0;
  return out;
}

Vector AttributeEncoder::encode(const Painting& painting) const {
  return encode_label(painting.attribute(attribute_));
}

SparseVector AttributeEncoder::encode_sparse(std::string_view label) const {
  SparseVector out(labels_.size());
  if (auto idx = index_of(label)) out.push_back(static_cast<std::uint32_t>(*idx), 1.0);
  return out;
}

void AttributeEncoder::save(const std::filesystem::path& path) const {
  std::string out;
  for (const auto& label : labels_) {
    if (label.find_first_of("\r\n") != std::string::npos) {
      throw DataError("attribute label contains a line break");
    }
    out += label;
    out += '\n';
  }
  io::write_file(path, out);
}

AttributeEncoder AttributeEncoder::load(const std::filesystem::path& path, Attribute attribute) {
  const std::string text = io::read_file(path);
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) labels.push_back(std::move(line));
    start = end + 1;
  }
  return AttributeEncoder(attribute, std::move(labels));
}

}  // namespace mmart
