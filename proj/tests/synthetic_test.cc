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

#include <gtest/gtest.h>

#include <set>

#include "mmart/errors.h"

namespace mmart {
namespace {

TEST(SyntheticWord, DistinctAndLowercase) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 2000; ++i) {
    const std::string w = synthetic_word(i);
    for (char c : w) EXPECT_TRUE(c >= 'a' && c <= 'z') << w;
    seen.insert(w);
  }
  EXPECT_EQ(seen.size(), 2000u);
}

TEST(SynthesizeCorpus, ShapeAndSplits) {
  const Corpus c = synthesize_corpus(
      {.paintings = 100, .types = 5, .authors = 7, .val_fraction = 0.2, .test_fraction = 0.1});
  EXPECT_EQ(c.size(), 100u);
  EXPECT_EQ(c.split(Split::kVal).size(), 20u);
  EXPECT_EQ(c.split(Split::kTest).size(), 10u);
  EXPECT_EQ(c.split(Split::kTrain).size(), 70u);
  EXPECT_EQ(c[0].id, "p00000");
  std::set<std::string> authors, types;
  for (const Painting& p : c.paintings()) {
    authors.insert(p.author);
    types.insert(p.art_type);
  }
  EXPECT_EQ(authors.size(), 7u);
  EXPECT_LE(types.size(), 5u);
}

TEST(SynthesizeCorpus, AttributesFollowAuthor) {
  const Corpus c = synthesize_corpus({.paintings = 40, .authors = 5});
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Painting& a = c[i];
    const Painting& b = c[(i + 5) % c.size()];
    EXPECT_EQ(a.author, b.author);
    EXPECT_EQ(a.school, b.school);
    EXPECT_EQ(a.timeframe, b.timeframe);
  }
}

TEST(SynthesizeCorpus, MentionRateControlsComments) {
  const Corpus always = synthesize_corpus({.paintings = 20, .author_mention_rate = 1.0});
  const Corpus never = synthesize_corpus({.paintings = 20, .author_mention_rate = 0.0});
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_NE(always[i].comment.find(always[i].author), std::string::npos);
    EXPECT_EQ(never[i].comment.find(never[i].author), std::string::npos);
  }
}

TEST(SynthesizeCorpus, DeterministicInSeed) {
  const SyntheticCorpusConfig cfg{.paintings = 30, .val_fraction = 0.3, .seed = 4};
  EXPECT_EQ(format_split(synthesize_corpus(cfg), Split::kTrain),
            format_split(synthesize_corpus(cfg), Split::kTrain));
}

TEST(SynthesizeCorpus, Errors) {
  EXPECT_THROW(synthesize_corpus({.paintings = 0}), UsageError);
  EXPECT_THROW(synthesize_corpus({.val_fraction = 0.5, .test_fraction = 0.5}), UsageError);
}

}  // namespace
}  // namespace mmart
