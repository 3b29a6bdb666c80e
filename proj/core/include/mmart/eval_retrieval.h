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
// Text2Art evaluation: cosine score matrices, recall at K, median rank and
// the ten-choice task.

#ifndef MMART_EVAL_RETRIEVAL_H_
#define MMART_EVAL_RETRIEVAL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmart/nn_core.h"
#include "mmart/projection.h"

namespace mmart {

enum class Direction { kTextToImage, kImageToText };

std::string_view to_string(Direction direction);

struct ScoreMatrix {
  std::vector<std::string> row_ids;  // queries
  std::vector<std::string> col_ids;  // candidates
  Matrix scores;
};

// scores[i][j] = dot(queries[i], candidates[j]).
ScoreMatrix score_embeddings(std::span<const Vector> queries, std::span<const Vector> candidates,
                             std::vector<std::string> row_ids, std::vector<std::string> col_ids);

// Text to image: rows are g(q_i), columns f(p_j). Image to text: transposed.
// Row i's ground truth is column i.
ScoreMatrix score_all(const ProjectionModel& model, const JointEncoding& data,
                      Direction direction);

std::vector<Vector> project_all_visual(const ProjectionModel& model, const JointEncoding& data);
std::vector<Vector> project_all_language(const ProjectionModel& model, const JointEncoding& data);

struct RetrievalReport {
  Direction direction = Direction::kTextToImage;
  double r1 = 0.0;
  double r5 = 0.0;
  double r10 = 0.0;
  std::size_t median_rank = 0;
  std::size_t queries = 0;

  // {"direction":...,"r1":...,"r5":...,"r10":...,"mr":...}
  std::string to_json() const;
};

// Rank of each row's ground-truth column: 1 + the number of columns with a
// strictly greater score + the number of earlier columns with an equal score.
// Throws UsageError when a ground-truth index is out of range.
std::vector<std::size_t> ground_truth_ranks(const ScoreMatrix& scores,
                                            std::span<const std::size_t> ground_truth);

// R@{1,5,10} and the lower median rank (position ceil(n/2) of the sorted
// ranks). Throws UsageError on an empty score matrix.
RetrievalReport compute_metrics(const ScoreMatrix& scores,
                                std::span<const std::size_t> ground_truth,
                                Direction direction = Direction::kTextToImage);
// Ground truth given as query id -> candidate id. Throws DataError when a
// query or its candidate is absent.
RetrievalReport compute_metrics(const ScoreMatrix& scores,
                                const std::map<std::string, std::string>& ground_truth,
                                Direction direction = Direction::kTextToImage);

// "query\tcandidate\tscore" debug dump, one line per cell.
void write_scores_tsv(const ScoreMatrix& scores, const std::filesystem::path& path);

enum class TenChoiceMode { kEasy, kDifficult };
std::string_view to_string(TenChoiceMode mode);
TenChoiceMode parse_ten_choice_mode(std::string_view name);

// score(query text i, candidate painting j).
using PairScorer = std::function<double(std::size_t query, std::size_t candidate)>;

// Each trial draws a query item and nine distractors (any other item in easy
// mode, other items of the query's type in difficult mode), shuffles the ten
// candidates and counts the trial correct when the true item is the first
// argmax. Returns correct / trials. Throws DataError when difficult mode has
// no type with at least ten members, UsageError when fewer than ten items
// exist.
double ten_choice_eval(std::span<const std::string> types, const PairScorer& scorer,
                       TenChoiceMode mode, std::size_t trials, std::uint64_t seed);
double ten_choice_eval(const ProjectionModel& model, const JointEncoding& data,
                       std::span<const std::string> types, TenChoiceMode mode,
                       std::size_t trials, std::uint64_t seed);

}  // namespace mmart

#endif  // MMART_EVAL_RETRIEVAL_H_
