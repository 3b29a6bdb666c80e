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

#ifndef MMART_TEXT_ENCODER_H_
#define MMART_TEXT_ENCODER_H_

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

// Lowercases `text` and returns its maximal runs of Unicode-alphabetic code
// points, in order. Bytes that are not valid UTF-8 are read as Latin-1.
std::vector<std::string> tokenize(std::string_view text);

// How `min_count` is applied when building a vocabulary.
enum class CountMode {
  kTotal,     // total occurrences over all documents
  kDocument,  // number of documents containing the term
};

std::string_view to_string(CountMode mode);
CountMode parse_count_mode(std::string_view name);

// Lexicographically ordered terms with their train-split document
// frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Validates: terms strictly increasing, each a single lowercase token,
  // 1 <= doc_freq <= n_docs.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
             std::uint32_t n_docs);

  std::size_t size() const { return terms_.size(); }
  std::span<const std::string> terms() const { return terms_; }
  std::uint32_t doc_freq(std::size_t i) const { return doc_freq_[i]; }
  std::uint32_t n_docs() const { return n_docs_; }
  std::optional<std::size_t> find(std::string_view term) const;

  // ln((1 + n_docs) / (1 + doc_freq)) + 1
  double idf(std::size_t i) const;

  // "#n_docs=<N>" then one "term<TAB>doc_freq" line per term.
  std::string format() const;
  static Vocabulary parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& o) const {
    return n_docs_ == o.n_docs_ && terms_ == o.terms_ && doc_freq_ == o.doc_freq_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::uint32_t n_docs_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Vocabulary over `documents`, keeping terms whose count (per `mode`) is at
// least `min_count`. Throws UsageError when min_count < 1.
Vocabulary build_vocabulary(std::span<const std::string> documents, std::uint32_t min_count = 1,
                            CountMode mode = CountMode::kTotal);

// Every title token of the train split, no threshold. Throws DataError on an
// empty train split.
Vocabulary build_title_vocab(const Corpus& corpus);
Vocabulary build_comment_vocab(const Corpus& corpus, std::uint32_t min_count = 10,
                               CountMode mode = CountMode::kTotal);

// Raw term count times smoothed idf, l2-normalized. Out-of-vocabulary tokens
// are dropped; a text with no known token encodes to the zero vector.
SparseVector tfidf_encode(std::string_view text, const Vocabulary& vocab);

struct LanguageVector {
  SparseVector title;
  SparseVector comment;
  SparseVector joint;  // title followed by comment, dim N_t + N_c
};

LanguageVector encode_language(const Painting& painting, const Vocabulary& title_vocab,
                               const Vocabulary& comment_vocab);
// Same encoding for free text, used by queries without a title.
LanguageVector encode_language(std::string_view title, std::string_view comment,
                               const Vocabulary& title_vocab, const Vocabulary& comment_vocab);

}  // namespace mmart

#endif  // MMART_TEXT_ENCODER_H_
