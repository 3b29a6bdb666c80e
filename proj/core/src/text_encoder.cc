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

#include "mmart/text_encoder.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <charconv>
#include <cmath>
#include <map>
#include <unordered_set>

#include "binary_io.h"
#include "mmart/errors.h"

namespace mmart {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      c = bytes[start];
      i = start + 1;
    }
    c = u_tolower(c);
    if (u_isUAlphabetic(c)) {
      char buf[U8_MAX_LENGTH];
      std::int32_t n = 0;
      U8_APPEND_UNSAFE(buf, n, c);
      current.append(buf, static_cast<std::size_t>(n));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string_view to_string(CountMode mode) {
  return mode == CountMode::kTotal ? "total" : "document";
}

CountMode parse_count_mode(std::string_view name) {
  if (name == "total") return CountMode::kTotal;
  if (name == "document") return CountMode::kDocument;
  throw UsageError("unknown count mode: " + std::string(name));
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
                       std::uint32_t n_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs) {
  if (terms_.size() != doc_freq_.size()) throw DataError("vocabulary: size mismatch");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw DataError("vocabulary terms must be unique and sorted: " + terms_[i]);
    }
    const auto tokens = tokenize(terms_[i]);
    if (tokens.size() != 1 || tokens[0] != terms_[i]) {
      throw DataError("vocabulary term is not a lowercase alphabetic token: " + terms_[i]);
    }
    if (doc_freq_[i] < 1 || doc_freq_[i] > n_docs_) {
      throw DataError("vocabulary doc_freq out of range for term " + terms_[i]);
    }
    index_.emplace(terms_[i], i);
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t i) const {
  return std::log((1.0 + n_docs_) / (1.0 + doc_freq_[i])) + 1.0;
}

std::string Vocabulary::format() const {
  std::string out = "#n_docs=" + std::to_string(n_docs_) + "\n";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out += terms_[i];
    out += '\t';
    out += std::to_string(doc_freq_[i]);
    out += '\n';
  }
  return out;
}

namespace {

std::uint32_t parse_u32(std::string_view s, std::string_view what) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("vocabulary: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Vocabulary Vocabulary::parse(std::string_view text) {
  constexpr std::string_view kHeader = "#n_docs=";
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  std::optional<std::uint32_t> n_docs;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!n_docs) {
      if (!line.starts_with(kHeader)) throw DataError("vocabulary: missing #n_docs header");
      n_docs = parse_u32(line.substr(kHeader.size()), "n_docs");
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw DataError("vocabulary: malformed line");
    terms.emplace_back(line.substr(0, tab));
    freqs.push_back(parse_u32(line.substr(tab + 1), "doc_freq"));
  }
  if (!n_docs) throw DataError("vocabulary: missing #n_docs header");
  return Vocabulary(std::move(terms), std::move(freqs), *n_docs);
}

void Vocabulary::save(const std::filesystem::path& path) const {
  io::write_file(path, format());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  return parse(io::read_file(path));
}

Vocabulary build_vocabulary(std::span<const std::string> documents, std::uint32_t min_count,
                            CountMode mode) {
  if (min_count < 1) throw UsageError("min_count must be at least 1");
  std::map<std::string, std::pair<std::uint64_t, std::uint32_t>> counts;  // total, docs
  for (const auto& doc : documents) {
    std::unordered_set<std::string> seen;
    for (auto& token : tokenize(doc)) {
      auto& entry = counts[token];
      ++entry.first;
      if (seen.insert(token).second) ++entry.second;
    }
  }
  std::vector<std::string> terms;
  std::vector<std::uint32_t> doc_freq;
  for (const auto& [term, c] : counts) {
    const std::uint64_t count = mode == CountMode::kTotal ? c.first : c.second;
    if (count >= min_count) {
      terms.push_back(term);
      doc_freq.push_back(c.second);
    }
  }
  return Vocabulary(std::move(terms), std::move(doc_freq),
                    static_cast<std::uint32_t>(documents.size()));
}

namespace {

std::vector<std::string> train_field(const Corpus& corpus, std::string Painting::*field) {
  const auto& train = corpus.split(Split::kTrain);
  if (train.empty()) throw DataError("cannot build a vocabulary from an empty train split");
  std::vector<std::string> docs;
  docs.reserve(train.size());
  for (std::size_t i : train) docs.push_back(corpus[i].*field);
  return docs;
}

}  // namespace

Vocabulary build_title_vocab(const Corpus& corpus) {
  return build_vocabulary(train_field(corpus, &Painting::title), 1, CountMode::kTotal);
}

Vocabulary build_comment_vocab(const Corpus& corpus, std::uint32_t min_count, CountMode mode) {
  if (min_count < 1) throw UsageError("min_count must be at least 1");
  return build_vocabulary(train_field(corpus, &Painting::comment), min_count, mode);
}

SparseVector tfidf_encode(std::string_view text, const Vocabulary& vocab) {
  std::map<std::size_t, std::uint32_t> tf;
  for (const auto& token : tokenize(text)) {
    if (auto idx = vocab.find(token)) ++tf[*idx];
  }
  SparseVector out(vocab.size());
  if (tf.empty()) return out;

  std::vector<double> values;
  values.reserve(tf.size());
  double sq = 0.0;
  for (const auto& [idx, count] : tf) {
    const double v = count * vocab.idf(idx);
    values.push_back(v);
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  std::size_t k = 0;
  for (const auto& [idx, count] : tf) {
    out.push_back(static_cast<std::uint32_t>(idx), values[k++] / norm);
  }
  return out;
}

LanguageVector encode_language(std::string_view title, std::string_view comment,
                               const Vocabulary& title_vocab, const Vocabulary& comment_vocab) {
  LanguageVector out;
  out.title = tfidf_encode(title, title_vocab);
  out.comment = tfidf_encode(comment, comment_vocab);
  out.joint = concat(out.title, out.comment);
  return out;
}

LanguageVector encode_language(const Painting& painting, const Vocabulary& title_vocab,
                               const Vocabulary& comment_vocab) {
  return encode_language(painting.title, painting.comment, title_vocab, comment_vocab);
}

}  // namespace mmart
