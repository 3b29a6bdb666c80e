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

#include "mmart/eval_retrieval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "mmart/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace mmart {
namespace {

ScoreMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  ScoreMatrix s;
  s.scores = Matrix(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.row_ids.push_back("q" + std::to_string(i));
    for (std::size_t j = 0; j < rows[i].size(); ++j) s.scores(i, j) = rows[i][j];
  }
  for (std::size_t j = 0; j < s.scores.cols(); ++j) s.col_ids.push_back("c" + std::to_string(j));
  return s;
}

std::vector<std::size_t> diagonal(std::size_t n) {
  std::vector<std::size_t> gt(n);
  std::iota(gt.begin(), gt.end(), std::size_t{0});
  return gt;
}

TEST(Metrics, PerfectDiagonal) {
  std::vector<std::vector<double>> rows(5, std::vector<double>(5, 0.0));
  for (std::size_t i = 0; i < 5; ++i) rows[i][i] = 1.0;
  const auto r = compute_metrics(to_matrix(rows), diagonal(5));
  EXPECT_EQ(r.r1, 1.0);
  EXPECT_EQ(r.r5, 1.0);
  EXPECT_EQ(r.r10, 1.0);
  EXPECT_EQ(r.median_rank, 1u);
  EXPECT_EQ(r.queries, 5u);
}

TEST(Metrics, RanksOneFourNine) {
  // Scores fall with the column index, so column j has rank j + 1.
  std::vector<std::vector<double>> rows(3, std::vector<double>(10));
  for (auto& row : rows) {
    for (std::size_t j = 0; j < 10; ++j) row[j] = 10.0 - static_cast<double>(j);
  }
  const std::vector<std::size_t> gt = {0, 3, 8};
  const ScoreMatrix s = to_matrix(rows);
  EXPECT_EQ(ground_truth_ranks(s, gt), (std::vector<std::size_t>{1, 4, 9}));
  const auto r = compute_metrics(s, gt);
  EXPECT_DOUBLE_EQ(r.r1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.r5, 2.0 / 3.0);
  EXPECT_EQ(r.r10, 1.0);
  EXPECT_EQ(r.median_rank, 4u);
}

TEST(Metrics, TiesCountEarlierColumnsOnly) {
  const ScoreMatrix s = to_matrix({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}});
  EXPECT_EQ(ground_truth_ranks(s, diagonal(3)), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Metrics, EvenCountUsesLowerMedian) {
  const ScoreMatrix s = to_matrix({{1, 0}, {1, 0}});
  // Ranks 1 and 2.
  EXPECT_EQ(compute_metrics(s, diagonal(2)).median_rank, 1u);
}

TEST(Metrics, MatchesSortingOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rows = oracle::random_scores(seed, 100);
    std::vector<std::size_t> gt = diagonal(100);
    std::rotate(gt.begin(), gt.begin() + static_cast<std::ptrdiff_t>(seed % 100), gt.end());
    const auto want = oracle::retrieval_metrics(rows, gt);
    const auto got = compute_metrics(to_matrix(rows), gt);
    ASSERT_EQ(got.r1, want.r1) << seed;
    ASSERT_EQ(got.r5, want.r5) << seed;
    ASSERT_EQ(got.r10, want.r10) << seed;
    ASSERT_EQ(got.median_rank, want.mr) << seed;
  }
}

TEST(Metrics, RecallMonotoneAndRankBounded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rows = oracle::random_scores(seed, 37);
    const ScoreMatrix s = to_matrix(rows);
    const auto r = compute_metrics(s, diagonal(37));
    EXPECT_LE(r.r1, r.r5);
    EXPECT_LE(r.r5, r.r10);
    EXPECT_GE(r.median_rank, 1u);
    EXPECT_LE(r.median_rank, 37u);
  }
}

TEST(Metrics, AppendingLowScoredCandidateKeepsRanks) {
  const auto rows = oracle::random_scores(4, 20);
  const ScoreMatrix s = to_matrix(rows);
  auto extended = rows;
  for (auto& row : extended) row.push_back(-std::numeric_limits<double>::infinity());
  EXPECT_EQ(ground_truth_ranks(to_matrix(extended), diagonal(20)),
            ground_truth_ranks(s, diagonal(20)));
}

TEST(Metrics, IdMapOverload) {
  ScoreMatrix s = to_matrix({{0.1, 0.9}, {0.8, 0.2}});
  const std::map<std::string, std::string> gt = {{"q0", "c1"}, {"q1", "c0"}};
  EXPECT_EQ(compute_metrics(s, gt).r1, 1.0);
  EXPECT_THROW(compute_metrics(s, std::map<std::string, std::string>{{"q0", "zz"}}), DataError);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(compute_metrics(ScoreMatrix{}, std::vector<std::size_t>{}), UsageError);
  const ScoreMatrix s = to_matrix({{1.0}});
  EXPECT_THROW(ground_truth_ranks(s, std::vector<std::size_t>{3}), UsageError);
}

TEST(Report, JsonShape) {
  RetrievalReport r;
  r.direction = Direction::kImageToText;
  r.r1 = 0.25;
  r.r5 = 0.5;
  r.r10 = 0.75;
  r.median_rank = 6;
  EXPECT_EQ(r.to_json(),
            R"({"direction":"image_to_text","r1":0.25,"r5":0.5,"r10":0.75,"mr":6})");
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["mr"], 6);
}

TEST(ScoreAll, PerfectModelAndTranspose) {
  // Identity-like heads: each row's p and q point the same way.
  ProjectionModel m;
  m.visual_weights = Matrix(3, 3);
  m.language_weights = Matrix(3, 3);
  m.visual_bias = Vector(3, 0.0);
  m.language_bias = Vector(3, 0.0);
  for (std::size_t k = 0; k < 3; ++k) {
    m.visual_weights(k, k) = 1.0;
    m.language_weights(k, k) = 1.0;
  }
  JointEncoding e;
  for (std::size_t i = 0; i < 3; ++i) {
    e.ids.push_back("p" + std::to_string(i));
    Vector v(3, 0.0);
    v[i] = 1.0;
    e.visual.push_back(v);
    e.language.push_back(SparseVector::from_dense(v));
  }
  const ScoreMatrix t2i = score_all(m, e, Direction::kTextToImage);
  const ScoreMatrix i2t = score_all(m, e, Direction::kImageToText);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(t2i.scores(i, j), i2t.scores(j, i));
  }
  EXPECT_EQ(compute_metrics(t2i, diagonal(3)).r1, 1.0);
  EXPECT_EQ(t2i.row_ids, e.ids);
}

TEST(ScoresTsv, OneLinePerCell) {
  testing::TempDir dir;
  write_scores_tsv(to_matrix({{0.5, -1.0}}), dir / "s.tsv");
  EXPECT_EQ(testing::read_file(dir / "s.tsv"), "q0\tc0\t0.5\nq0\tc1\t-1\n");
}

TEST(TenChoice, RandomScorerNearOneTenth) {
  std::vector<std::string> types(200, "portrait");
  Rng noise(3);
  Matrix s(200, 200);
  for (double& x : s.data()) x = noise.uniform();
  const double acc = ten_choice_eval(
      types, [&](std::size_t q, std::size_t c) { return s(q, c); }, TenChoiceMode::kEasy, 10000,
      7);
  EXPECT_NEAR(acc, 0.1, 0.03);
}

TEST(TenChoice, ConstantScorerIsChance) {
  // Ties go to the first shuffled candidate, which is the answer 1 time in 10.
  std::vector<std::string> types(50, "x");
  const double acc = ten_choice_eval(
      types, [](std::size_t, std::size_t) { return 0.0; }, TenChoiceMode::kEasy, 10000, 1);
  EXPECT_NEAR(acc, 0.1, 0.03);
}

TEST(TenChoice, PerfectScorerIsOne) {
  std::vector<std::string> types;
  for (int i = 0; i < 30; ++i) types.push_back(i % 2 == 0 ? "a" : "b");
  const auto perfect = [](std::size_t q, std::size_t c) { return q == c ? 1.0 : 0.0; };
  EXPECT_EQ(ten_choice_eval(types, perfect, TenChoiceMode::kEasy, 500, 2), 1.0);
  EXPECT_EQ(ten_choice_eval(types, perfect, TenChoiceMode::kDifficult, 500, 2), 1.0);
}

TEST(TenChoice, DifficultDistractorsShareType) {
  std::vector<std::string> types;
  for (int i = 0; i < 40; ++i) types.push_back(i < 12 ? "a" : (i < 20 ? "b" : "c"));
  bool ok = true;
  const auto scorer = [&](std::size_t q, std::size_t c) {
    ok &= types[q] == types[c];
    return 0.0;
  };
  ten_choice_eval(types, scorer, TenChoiceMode::kDifficult, 300, 5);
  EXPECT_TRUE(ok);
}

TEST(TenChoice, Errors) {
  std::vector<std::string> nine(9, "a");
  const auto scorer = [](std::size_t, std::size_t) { return 0.0; };
  EXPECT_THROW(ten_choice_eval(nine, scorer, TenChoiceMode::kEasy, 10, 0), UsageError);
  std::vector<std::string> spread;
  for (int i = 0; i < 20; ++i) spread.push_back(std::to_string(i % 3));
  EXPECT_THROW(ten_choice_eval(spread, scorer, TenChoiceMode::kDifficult, 10, 0), DataError);
  EXPECT_THROW(parse_ten_choice_mode("medium"), UsageError);
  EXPECT_EQ(parse_ten_choice_mode("difficult"), TenChoiceMode::kDifficult);
}

TEST(TenChoice, DeterministicInSeed) {
  std::vector<std::string> types(40, "x");
  Rng noise(1);
  Matrix s(40, 40);
  for (double& x : s.data()) x = noise.uniform();
  const auto scorer = [&](std::size_t q, std::size_t c) { return s(q, c); };
  EXPECT_EQ(ten_choice_eval(types, scorer, TenChoiceMode::kEasy, 1000, 9),
            ten_choice_eval(types, scorer, TenChoiceMode::kEasy, 1000, 9));
}

}  // namespace
}  // namespace mmart
