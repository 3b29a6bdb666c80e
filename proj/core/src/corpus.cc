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

#include "mmart/corpus.h"

#include <algorithm>
#include <optional>
#include <set>

#include "binary_io.h"
#include "mmart/errors.h"

namespace mmart {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  for (Split s : kAllSplits) {
    if (to_string(s) == name) return s;
  }
  throw UsageError("unknown split: " + std::string(name));
}

std::string_view to_string(Attribute attribute) {
  switch (attribute) {
    case Attribute::kType: return "type";
    case Attribute::kSchool: return "school";
    case Attribute::kTimeframe: return "timeframe";
    case Attribute::kAuthor: return "author";
  }
  return "?";
}

Attribute parse_attribute(std::string_view name) {
  for (Attribute a : kAllAttributes) {
    if (to_string(a) == name) return a;
  }
  throw UsageError("unknown attribute: " + std::string(name));
}

const std::string& Painting::attribute(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kType: return art_type;
    case Attribute::kSchool: return school;
    case Attribute::kTimeframe: return timeframe;
    case Attribute::kAuthor: return author;
  }
  return art_type;
}

Corpus::Corpus(std::vector<Painting> paintings) : paintings_(std::move(paintings)) {
  for (std::size_t i = 0; i < paintings_.size(); ++i) {
    const auto& p = paintings_[i];
    if (!by_id_.emplace(p.id, i).second) throw DataError("duplicate id: " + p.id);
    split_index_[static_cast<std::size_t>(p.split)].push_back(i);
  }
}

std::vector<const Painting*> Corpus::split_paintings(Split split) const {
  std::vector<const Painting*> out;
  for (std::size_t i : this->split(split)) out.push_back(&paintings_[i]);
  return out;
}

const Painting* Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &paintings_[it->second];
}

std::size_t Corpus::index_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) throw DataError("unknown painting id: " + std::string(id));
  return it->second;
}

namespace {

enum Column { kImageFile, kDescription, kAuthor, kTitle, kTechnique, kDate, kType, kSchool,
              kTimeframe, kColumnCount };

constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
    "IMAGE_FILE", "DESCRIPTION", "AUTHOR", "TITLE", "TECHNIQUE",
    "DATE",       "TYPE",        "SCHOOL", "TIMEFRAME"};

std::vector<std::string_view> split_cells(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string stem(std::string_view file) {
  const auto slash = file.find_last_of("/\\");
  if (slash != std::string_view::npos) file.remove_prefix(slash + 1);
  const auto dot = file.rfind('.');
  if (dot != std::string_view::npos && dot > 0) file = file.substr(0, dot);
  return std::string(file);
}

std::string categorical(std::string_view cell) {
  cell = trim_ascii(cell);
  return cell.empty() ? std::string(kUnknownLabel) : std::string(cell);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

void load_split_file(const SplitFile& file, char delimiter, std::vector<Painting>& out,
                     std::vector<std::string>& diagnostics) {
  const std::string contents = io::read_file(file.path);
  std::string_view text = contents;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw DataError(file.path.string() + ": missing header row");
  }

  const auto header = split_cells(lines[0], delimiter);
  std::array<std::size_t, kColumnCount> position{};
  for (std::size_t col = 0; col < kColumnCount; ++col) {
    std::optional<std::size_t> found;
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (upper(trim_ascii(header[h])) == kColumnNames[col]) found = h;
    }
    if (!found) {
      throw DataError(file.path.string() + ": header missing column " +
                      std::string(kColumnNames[col]));
    }
    position[col] = *found;
  }

  for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
    const auto line = lines[line_no];
    if (line.empty()) continue;
    const auto cells = split_cells(line, delimiter);
    const auto diag = [&](const std::string& reason) {
      diagnostics.push_back("ROW " + std::to_string(line_no) + ": " + reason + " (" +
                            file.path.filename().string() + ")");
    };
    if (cells.size() < header.size()) {
      std::size_t first_missing = kColumnCount;
      for (std::size_t col = 0; col < kColumnCount; ++col) {
        if (position[col] >= cells.size() &&
            (first_missing == kColumnCount || position[col] < position[first_missing])) {
          first_missing = col;
        }
      }
      if (first_missing < kColumnCount) {
        diag("missing field " + std::string(kColumnNames[first_missing]));
        continue;
      }
    }
    if (cells.size() != header.size()) {
      diag("expected " + std::to_string(header.size()) + " fields, found " +
           std::to_string(cells.size()));
      continue;
    }
    const auto cell = [&](Column c) { return cells[position[c]]; };
    const auto image_file = trim_ascii(cell(kImageFile));
    if (image_file.empty()) {
      diag("empty IMAGE_FILE");
      continue;
    }

    Painting p;
    p.image_file = std::string(image_file);
    p.id = stem(image_file);
    p.comment = std::string(cell(kDescription));
    p.title = std::string(cell(kTitle));
    p.author = categorical(cell(kAuthor));
    p.technique = std::string(cell(kTechnique));
    p.date = std::string(cell(kDate));
    p.art_type = categorical(cell(kType));
    p.school = categorical(cell(kSchool));
    p.timeframe = categorical(cell(kTimeframe));
    p.split = file.split;
    out.push_back(std::move(p));
  }
}

}  // namespace

LoadResult load_corpus(std::span<const SplitFile> files, char delimiter) {
  std::vector<Painting> paintings;
  std::vector<std::string> diagnostics;
  for (const auto& file : files) load_split_file(file, delimiter, paintings, diagnostics);
  return {Corpus(std::move(paintings)), std::move(diagnostics)};
}

std::string format_split(const Corpus& corpus, Split split, char delimiter) {
  std::string out;
  for (std::size_t col = 0; col < kColumnCount; ++col) {
    if (col > 0) out.push_back(delimiter);
    out.append(kColumnNames[col]);
  }
  out.push_back('\n');
  for (const Painting* p : corpus.split_paintings(split)) {
    const std::array<const std::string*, kColumnCount> fields = {
        &p->image_file, &p->comment, &p->author,    &p->title,    &p->technique,
        &p->date,       &p->art_type, &p->school, &p->timeframe};
    for (std::size_t col = 0; col < kColumnCount; ++col) {
      const std::string& f = *fields[col];
      if (f.find(delimiter) != std::string::npos || f.find_first_of("\r\n") != std::string::npos) {
        throw DataError("field " + std::string(kColumnNames[col]) + " of " + p->id +
                        " contains a delimiter or line break");
      }
      if (col > 0) out.push_back(delimiter);
      out.append(f);
    }
    out.push_back('\n');
  }
  return out;
}

void write_split(const Corpus& corpus, Split split, const std::filesystem::path& path,
                 char delimiter) {
  io::write_file(path, format_split(corpus, split, delimiter));
}

std::vector<std::string> attribute_labels(const Corpus& corpus, Attribute attribute) {
  const auto& train = corpus.split(Split::kTrain);
  if (train.empty()) throw DataError("attribute_labels: train split is empty");
  std::set<std::string> labels;
  for (std::size_t i : train) labels.insert(corpus[i].attribute(attribute));
  return {labels.begin(), labels.end()};
}

std::vector<std::string> attribute_labels(const Corpus& corpus, std::string_view attribute) {
  return attribute_labels(corpus, parse_attribute(attribute));
}

}  // namespace mmart
