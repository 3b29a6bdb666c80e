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

#include "mmart/synthetic.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>
#include <vector>

#include "mmart/errors.h"
#include "mmart/nn_core.h"

namespace mmart {
namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

constexpr std::array<std::string_view, 10> kTypes = {
    "portrait", "landscape", "religious", "genre",    "mythological",
    "historical", "interior", "still",    "battle", "study"};

constexpr std::array<std::string_view, 24> kFiller = {
    "light",  "shadow", "colour", "canvas", "figure", "brush",  "gold",   "river",
    "garden", "window", "cloth",  "silver", "morning", "evening", "hill",  "stone",
    "water",  "mirror", "flower", "column", "arch",   "cloud",  "table",  "candle"};

std::string type_name(std::size_t t) {
  if (t < kTypes.size()) return std::string(kTypes[t]);
  return "kind" + synthetic_word(t, 2);
}

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
  return word;
}

}  // namespace

std::string synthetic_word(std::size_t index, std::size_t syllables) {
  const std::size_t base = kConsonants.size() * kVowels.size();
  std::string out;
  for (std::size_t s = 0; s < syllables || index > 0; ++s) {
    const std::size_t digit = index % base;
    index /= base;
    out += kConsonants[digit / kVowels.size()];
    out += kVowels[digit % kVowels.size()];
  }
  return out;
}

Corpus synthesize_corpus(const SyntheticCorpusConfig& config) {
  if (config.paintings == 0 || config.types == 0 || config.authors == 0 || config.schools == 0 ||
      config.timeframes == 0) {
    throw UsageError("synthetic corpus sizes must be positive");
  }
  if (config.val_fraction < 0.0 || config.test_fraction < 0.0 ||
      config.val_fraction + config.test_fraction >= 1.0) {
    throw UsageError("split fractions must be non-negative and sum to less than 1");
  }

  Rng rng = Rng::stream(config.seed, "synthetic/corpus");
  std::vector<std::string> authors;
  for (std::size_t a = 0; a < config.authors; ++a) {
    authors.push_back(synthetic_word(a, 2) + "r");
  }

  std::vector<Painting> paintings(config.paintings);
  char id[32];
  for (std::size_t i = 0; i < config.paintings; ++i) {
    Painting& p = paintings[i];
    std::snprintf(id, sizeof(id), "p%05zu", i);
    p.id = id;
    p.image_file = p.id + ".jpg";
    const std::size_t a = i % config.authors;
    const std::string type = type_name(rng.uniform_index(config.types));
    p.author = capitalize(authors[a]);
    p.art_type = capitalize(type);
    p.school = capitalize("school" + synthetic_word(a % config.schools, 1));
    const std::size_t tf = a % config.timeframes;
    p.timeframe = std::to_string(1401 + 50 * tf) + "-" + std::to_string(1450 + 50 * tf);
    p.technique = "Oil on canvas";
    p.date = std::to_string(1401 + 50 * tf + static_cast<int>(rng.uniform_index(50)));
    p.title = capitalize(synthetic_word(i)) + " " + type;

    std::string filler;
    for (std::size_t k = 0; k < config.filler_words; ++k) {
      if (k > 0) filler += " and ";
      filler += kFiller[rng.uniform_index(kFiller.size())];
    }
    if (rng.uniform() < config.author_mention_rate) {
      p.comment = "This " + type + " was painted by " + p.author + ". " + p.author + " used " +
                  filler + ".";
    } else {
      p.comment = "This " + type + " shows " + filler + ".";
    }
  }

  // Held-out paintings are drawn from a shuffled order.
  std::vector<std::size_t> order(config.paintings);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng = Rng::stream(config.seed, "synthetic/split");
  split_rng.shuffle(std::span<std::size_t>(order));
  const auto n = static_cast<double>(config.paintings);
  const auto n_test = static_cast<std::size_t>(std::floor(config.test_fraction * n));
  const auto n_val = static_cast<std::size_t>(std::floor(config.val_fraction * n));
  for (std::size_t k = 0; k < n_test; ++k) paintings[order[k]].split = Split::kTest;
  for (std::size_t k = n_test; k < n_test + n_val; ++k) paintings[order[k]].split = Split::kVal;
  return Corpus(std::move(paintings));
}

}  // namespace mmart
