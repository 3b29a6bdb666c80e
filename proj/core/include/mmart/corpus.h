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
// Painting metadata: records, split bookkeeping, and the delimited-text
// catalogue loader. Each split is one file with the header
//
//   IMAGE_FILE  DESCRIPTION  AUTHOR  TITLE  TECHNIQUE  DATE  TYPE  SCHOOL  TIMEFRAME

#ifndef MMART_CORPUS_H_
#define MMART_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mmart {

enum class Split { kTrain, kVal, kTest };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kVal, Split::kTest};

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

// Categorical fields usable as attribute labels.
enum class Attribute { kType, kSchool, kTimeframe, kAuthor };
inline constexpr std::array<Attribute, 4> kAllAttributes = {
    Attribute::kType, Attribute::kSchool, Attribute::kTimeframe, Attribute::kAuthor};

std::string_view to_string(Attribute attribute);
// Throws UsageError("unknown attribute: <name>").
Attribute parse_attribute(std::string_view name);

// Empty categorical cells are normalized to this label.
inline constexpr std::string_view kUnknownLabel = "UNKNOWN";

struct Painting {
  std::string id;  // image file name without extension
  std::string image_file;
  std::string title;
  std::string comment;
  std::string author;
  std::string technique;
  std::string date;
  std::string art_type;
  std::string school;
  std::string timeframe;
  Split split = Split::kTrain;

  const std::string& attribute(Attribute attribute) const;

  bool operator==(const Painting&) const = default;
};

// Immutable collection of paintings with unique ids. Paintings keep the
// order they were added in; `split()` lists indices in that order.
class Corpus {
 public:
  Corpus() = default;
  // Throws DataError on a duplicate id.
  explicit Corpus(std::vector<Painting> paintings);

  std::span<const Painting> paintings() const { return paintings_; }
  std::size_t size() const { return paintings_.size(); }
  const Painting& operator[](std::size_t i) const { return paintings_[i]; }

  const std::vector<std::size_t>& split(Split split) const {
    return split_index_[static_cast<std::size_t>(split)];
  }
  std::vector<const Painting*> split_paintings(Split split) const;

  const Painting* find(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;  // throws DataError if absent

  bool operator==(const Corpus& other) const { return paintings_ == other.paintings_; }

 private:
  std::vector<Painting> paintings_;
  std::array<std::vector<std::size_t>, 3> split_index_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct SplitFile {
  Split split;
  std::filesystem::path path;
};

struct LoadResult {
  Corpus corpus;
  // One line per rejected row: "ROW <n>: <reason>".
  std::vector<std::string> diagnostics;
};

// Parses one delimited file per split. A header row must name every
// mandatory column (case-insensitive, any order). Rows whose cell count does
// not match the header, or with an empty IMAGE_FILE, are rejected with a
// diagnostic; row numbers count data lines from 1. CRLF line endings and a
// UTF-8 byte-order mark are accepted.
//
// Throws DataError when a file is unreadable, a header lacks a mandatory
// column, or an id repeats within or across files.
LoadResult load_corpus(std::span<const SplitFile> files, char delimiter = '\t');

// Inverse of load_corpus for a single split. Throws DataError when a field
// contains the delimiter or a line break.
std::string format_split(const Corpus& corpus, Split split, char delimiter = '\t');
void write_split(const Corpus& corpus, Split split, const std::filesystem::path& path,
                 char delimiter = '\t');

// Sorted unique values of `attribute` over the train split. Throws DataError
// when the train split is empty.
std::vector<std::string> attribute_labels(const Corpus& corpus, Attribute attribute);
std::vector<std::string> attribute_labels(const Corpus& corpus, std::string_view attribute);

}  // namespace mmart

#endif  // MMART_CORPUS_H_
