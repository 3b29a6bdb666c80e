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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_map>

#include "mmart/errors.h"
#include "json.hpp"

namespace mmart {

std::string_view to_string(Direction direction) {
  return direction == Direction::kTextToImage ? "text_to_image" : "image_to_text";
}

ScoreMatrix score_embeddings(std::span<const Vector> queries, std::span<const Vector> candidates,
                             std::vector<std::string> row_ids, std::vector<std::string> col_ids) {
  if (row_ids.size() != queries.size() || col_ids.size() != candidates.size()) {
    throw UsageError("score matrix ids do not match the embeddings");
  }
  ScoreMatrix out{std::move(row_ids), std::move(col_ids),
                  Matrix(queries.size(), candidates.size())};
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      out.scores(i, j) = dot(queries[i], candidates[j]);
    }
  }
  return out;
}

std::vector<Vector> project_all_visual(const ProjectionModel& model, const JointEncoding& data) {
  std::vector<Vector> out;
  out.reserve(data.size());
  for (const auto& p : data.visual) out.push_back(project_visual(model, p));
  return out;
}

std::vector<Vector> project_all_language(const ProjectionModel& model,
                                         const JointEncoding& data) {
  std::vector<Vector> out;
  out.reserve(data.size());
  for (const auto& q : data.language) out.push_back(project_language(model, q));
  return out;
}

ScoreMatrix score_all(const ProjectionModel& model, const JointEncoding& data,
                      Direction direction) {
  const auto vis = project_all_visual(model, data);
  const auto lang = project_all_language(model, data);
  if (direction == Direction::kTextToImage) return score_embeddings(lang, vis, data.ids, data.ids);
  return score_embeddings(vis, lang, data.ids, data.ids);
}

std::string RetrievalReport::to_json() const {
  nlohmann::ordered_json j;
  j["direction"] = std::string(to_string(direction));
  j["r1"] = r1;
  j["r5"] = r5;
  j["r10"] = r10;
  j["mr"] = median_rank;
  return j.dump();
}

std::vector<std::size_t> ground_truth_ranks(const ScoreMatrix& scores,
                                            std::span<const std::size_t> ground_truth) {
  const Matrix& s = scores.scores;
  if (ground_truth.size() != s.rows()) {
    throw UsageError("ground truth has " + std::to_string(ground_truth.size()) +
                     " entries for " + std::to_string(s.rows()) + " queries");
  }
  std::vector<std::size_t> ranks(s.rows());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const std::size_t g = ground_truth[i];
    if (g >= s.cols()) throw UsageError("ground-truth column out of range");
    const double target = s(i, g);
    std::size_t rank = 1;
    for (std::size_t j = 0; j < s.cols(); ++j) {
      const double v = s(i, j);
      if (v > target || (v == target && j < g)) ++rank;
    }
    ranks[i] = rank;
  }
  return ranks;
}

RetrievalReport compute_metrics(const ScoreMatrix& scores,
                                std::span<const std::size_t> ground_truth, Direction direction) {
  if (scores.scores.rows() == 0 || scores.scores.cols() == 0) {
    throw UsageError("empty score matrix");
  }
  auto ranks = ground_truth_ranks(scores, ground_truth);
  const double n = static_cast<double>(ranks.size());
  auto recall = [&](std::size_t k) {
    return static_cast<double>(std::count_if(ranks.begin(), ranks.end(),
                                             [k](std::size_t r) { return r <= k; })) /
           n;
  };
  RetrievalReport report;
  report.direction = direction;
  report.queries = ranks.size();
  report.r1 = recall(1);
  report.r5 = recall(5);
  report.r10 = recall(10);
  const std::size_t mid = (ranks.size() + 1) / 2 - 1;
  std::nth_element(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(mid), ranks.end());
  report.median_rank = ranks[mid];
  return report;
}

RetrievalReport compute_metrics(const ScoreMatrix& scores,
                                const std::map<std::string, std::string>& ground_truth,
                                Direction direction) {
  std::unordered_map<std::string_view, std::size_t> col_index;
  for (std::size_t j = 0; j < scores.col_ids.size(); ++j) col_index.emplace(scores.col_ids[j], j);
  std::vector<std::size_t> gt(scores.row_ids.size());
  for (std::size_t i = 0; i < scores.row_ids.size(); ++i) {
    const auto it = ground_truth.find(scores.row_ids[i]);
    if (it == ground_truth.end()) throw DataError("no ground truth for query " + scores.row_ids[i]);
    const auto col = col_index.find(it->second);
    if (col == col_index.end()) throw DataError("ground-truth candidate not scored: " + it->second);
    gt[i] = col->second;
  }
  return compute_metrics(scores, gt, direction);
}

void write_scores_tsv(const ScoreMatrix& scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  char buf[32];
  for (std::size_t i = 0; i < scores.row_ids.size(); ++i) {
    for (std::size_t j = 0; j < scores.col_ids.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", scores.scores(i, j));
      out << scores.row_ids[i] << '\t' << scores.col_ids[j] << '\t' << buf << '\n';
    }
  }
  if (!out) throw DataError("cannot write " + path.string());
}

std::string_view to_string(TenChoiceMode mode) {
  return mode == TenChoiceMode::kEasy ? "easy" : "difficult";
}

TenChoiceMode parse_ten_choice_mode(std::string_view name) {
  if (name == "easy") return TenChoiceMode::kEasy;
  if (name == "difficult") return TenChoiceMode::kDifficult;
  throw UsageError("unknown ten-choice mode: " + std::string(name));
}

double ten_choice_eval(std::span<const std::string> types, const PairScorer& scorer,
                       TenChoiceMode mode, std::size_t trials, std::uint64_t seed) {
  constexpr std::size_t kChoices = 10;
  const std::size_t n = types.size();
  if (n < kChoices) throw UsageError("ten-choice needs at least ten items");
  if (trials == 0) throw UsageError("ten-choice needs at least one trial");

  std::map<std::string_view, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < n; ++i) by_type[types[i]].push_back(i);
  std::vector<std::size_t> eligible;
  if (mode == TenChoiceMode::kDifficult) {
    for (const auto& [type, members] : by_type) {
      if (members.size() >= kChoices) eligible.insert(eligible.end(), members.begin(), members.end());
    }
    if (eligible.empty()) throw DataError("difficult mode needs a type with at least ten items");
    std::sort(eligible.begin(), eligible.end());
  }

  Rng rng = Rng::stream(seed, "ten_choice");
  std::vector<std::size_t> pool;
  std::vector<std::size_t> candidates(kChoices);
  std::size_t correct = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t query;
    if (mode == TenChoiceMode::kEasy) {
      query = rng.uniform_index(n);
      pool.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (i != query) pool.push_back(i);
      }
    } else {
      query = eligible[rng.uniform_index(eligible.size())];
      pool.clear();
      for (std::size_t i : by_type[types[query]]) {
        if (i != query) pool.push_back(i);
      }
    }
    candidates[0] = query;
    for (std::size_t k = 0; k + 1 < kChoices; ++k) {
      std::swap(pool[k], pool[k + rng.uniform_index(pool.size() - k)]);
      candidates[k + 1] = pool[k];
    }
    rng.shuffle(std::span<std::size_t>(candidates));
    std::size_t best = 0;
    double best_score = scorer(query, candidates[0]);
    for (std::size_t k = 1; k < kChoices; ++k) {
      const double s = scorer(query, candidates[k]);
      if (s > best_score) {
        best_score = s;
        best = k;
      }
    }
    if (candidates[best] == query) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(trials);
}

double ten_choice_eval(const ProjectionModel& model, const JointEncoding& data,
                       std::span<const std::string> types, TenChoiceMode mode,
                       std::size_t trials, std::uint64_t seed) {
  if (types.size() != data.size()) throw UsageError("one type per painting is required");
  const auto vis = project_all_visual(model, data);
  const auto lang = project_all_language(model, data);
  return ten_choice_eval(
      types, [&](std::size_t q, std::size_t c) { return dot(lang[q], vis[c]); }, mode, trials,
      seed);
}

}  // namespace mmart
