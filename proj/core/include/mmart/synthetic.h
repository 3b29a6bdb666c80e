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
// Generated corpora for tests, benchmarks and smoke runs.

#ifndef MMART_SYNTHETIC_H_
#define MMART_SYNTHETIC_H_

#include <cstdint>
#include <string>

#include "mmart/corpus.h"

namespace mmart {

struct SyntheticCorpusConfig {
  std::size_t paintings = 64;
  std::size_t types = 4;
  std::size_t authors = 8;
  std::size_t schools = 3;
  std::size_t timeframes = 4;
  double val_fraction = 0.0;
  double test_fraction = 0.0;
  // Probability that a comment names the painting's author (twice).
  double author_mention_rate = 1.0;
  std::size_t filler_words = 4;
  std::uint64_t seed = 0;
};

// Painting i gets author i % authors; school and timeframe follow the author
// and the type is drawn uniformly. Titles hold a word unique to the painting
// plus the type name. Comments follow a fixed template.
// Throws UsageError on zero paintings, types or authors, or fractions whose
// sum is not below 1.
Corpus synthesize_corpus(const SyntheticCorpusConfig& config);

// Pronounceable lowercase word for `index`, distinct for distinct indices.
std::string synthetic_word(std::size_t index, std::size_t syllables = 3);

}  // namespace mmart

#endif  // MMART_SYNTHETIC_H_
