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

#include <benchmark/benchmark.h>

#include <array>

#include "mmart/eval_retrieval.h"
#include "mmart/knowledge_graph.h"
#include "mmart/nn_core.h"
#include "mmart/projection.h"
#include "mmart/synthetic.h"
#include "mmart/text_encoder.h"

namespace {

using namespace mmart;

const Corpus& corpus() {
  static const Corpus c = synthesize_corpus(
      {.paintings = 2000, .types = 10, .authors = 100, .filler_words = 12, .seed = 1});
  return c;
}

void BM_BuildCommentVocab(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_comment_vocab(corpus(), 1));
}
BENCHMARK(BM_BuildCommentVocab);

void BM_TfIdfEncode(benchmark::State& state) {
  const Vocabulary v = build_comment_vocab(corpus(), 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tfidf_encode(corpus()[i % corpus().size()].comment, v));
    ++i;
  }
}
BENCHMARK(BM_TfIdfEncode);

void BM_SparseAffine(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  Matrix w(128, dim, 0.01);
  const Vector b(128, 0.0);
  Vector out(128);
  Rng rng(2);
  SparseVector x(dim);
  for (std::uint32_t k = 0; k < dim; k += 97) x.push_back(k, rng.normal());
  for (auto _ : state) {
    affine(w, x, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SparseAffine)->Arg(1000)->Arg(10000);

void BM_DenseAffine(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  Matrix w(128, dim, 0.01);
  const Vector b(128, 0.0);
  Vector x(dim, 0.5), out(128);
  for (auto _ : state) {
    affine(w, x, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_DenseAffine)->Arg(1000)->Arg(10000);

void BM_ComputeMetrics(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ScoreMatrix s;
  s.scores = Matrix(n, n);
  Rng rng(3);
  for (double& x : s.scores.data()) x = rng.uniform();
  std::vector<std::size_t> gt(n);
  for (std::size_t i = 0; i < n; ++i) gt[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(s, gt));
}
BENCHMARK(BM_ComputeMetrics)->Arg(100)->Arg(1000);

void BM_SampleWalks(benchmark::State& state) {
  const std::array<Attribute, 4> attrs = {Attribute::kType, Attribute::kSchool,
                                          Attribute::kTimeframe, Attribute::kAuthor};
  const KnowledgeGraph g = build_graph(corpus(), attrs);
  Node2vecConfig cfg;
  cfg.walks_per_node = 1;
  cfg.walk_length = 20;
  for (auto _ : state) benchmark::DoNotOptimize(sample_walks(g, cfg));
}
BENCHMARK(BM_SampleWalks)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
