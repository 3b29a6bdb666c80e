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

#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "mmart/errors.h"
#include "test_util.h"

namespace mmart {
namespace {

using testing::make_painting;

TEST(AttributeEncoder, OneHot) {
  const AttributeEncoder enc(Attribute::kType, {"landscape", "portrait"});
  EXPECT_EQ(enc.encode(make_painting("a", "t", "c", "portrait")), (Vector{0, 1}));
  EXPECT_EQ(enc.encode_label("landscape"), (Vector{1, 0}));
}

TEST(AttributeEncoder, UnseenLabelIsZero) {
  const AttributeEncoder enc(Attribute::kType, {"landscape", "portrait"});
  EXPECT_EQ(enc.encode_label("still-life"), (Vector{0, 0}));
  EXPECT_EQ(enc.encode_sparse("still-life").nnz(), 0u);
}

TEST(AttributeEncoder, SingleClass) {
  const AttributeEncoder enc(Attribute::kAuthor, {"X"});
  EXPECT_EQ(enc.encode_label("X"), (Vector{1}));
}

TEST(AttributeEncoder, BuildFromTrainSplit) {
  const Corpus c({make_painting("a", "t", "c", "portrait", "B"),
                  make_painting("b", "t", "c", "genre", "A"),
                  make_painting("d", "t", "c", "battle", "C", Split::kTest)});
  const AttributeEncoder enc = AttributeEncoder::build(c, Attribute::kAuthor);
  EXPECT_EQ(enc.labels(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(enc.cardinality(), 2u);
  EXPECT_EQ(enc.index_of("B"), 1u);
  EXPECT_FALSE(enc.index_of("C").has_value());
}

TEST(AttributeEncoder, SumIsOneIffSeenAndInjective) {
  const std::vector<std::string> labels = {"a", "b", "c", "d"};
  const AttributeEncoder enc(Attribute::kSchool, labels);
  std::set<Vector> distinct;
  for (const auto& l : labels) {
    const Vector v = enc.encode_label(l);
    EXPECT_EQ(std::accumulate(v.begin(), v.end(), 0.0), 1.0);
    distinct.insert(v);
  }
  EXPECT_EQ(distinct.size(), labels.size());
  const Vector unseen = enc.encode_label("zzz");
  EXPECT_EQ(std::accumulate(unseen.begin(), unseen.end(), 0.0), 0.0);
}

TEST(AttributeEncoder, SparseMatchesDense) {
  const AttributeEncoder enc(Attribute::kType, {"a", "b", "c"});
  EXPECT_EQ(enc.encode_sparse("b").to_dense(), enc.encode_label("b"));
}

TEST(AttributeEncoder, SaveLoadRoundTrip) {
  testing::TempDir dir;
  const AttributeEncoder enc(Attribute::kTimeframe, {"1401-1450", "1451-1500", "UNKNOWN"});
  enc.save(dir / "labels.txt");
  EXPECT_EQ(testing::read_file(dir / "labels.txt"), "1401-1450\n1451-1500\nUNKNOWN\n");
  EXPECT_EQ(AttributeEncoder::load(dir / "labels.txt", Attribute::kTimeframe), enc);
}

TEST(AttributeEncoder, DuplicateLabelRejected) {
  EXPECT_THROW(AttributeEncoder(Attribute::kType, {"a", "a"}), DataError);
}

}  // namespace
}  // namespace mmart
