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
// In-memory run of the whole training pipeline on a synthetic corpus.

#ifndef MMART_TESTS_SUPPORT_EXPERIMENT_H_
#define MMART_TESTS_SUPPORT_EXPERIMENT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mmart/contextnet.h"
#include "mmart/eval_retrieval.h"
#include "mmart/feature_store.h"
#include "mmart/knowledge_graph.h"
#include "mmart/projection.h"
#include "mmart/synthetic.h"
#include "mmart/text_encoder.h"

namespace mmart::testing {

struct ExperimentConfig {
  SyntheticCorpusConfig corpus;
  SyntheticFeatureConfig features;
  ProjectionMode mode = ProjectionMode::kAttContextNet;
  Attribute attribute = Attribute::kAuthor;
  std::uint32_t comment_min_count = 10;
  Node2vecConfig node2vec;
  ContextNetConfig contextnet;
  ProjectionConfig projection;
};

struct ExperimentResult {
  ProjectionTraining training;
  RetrievalReport train_t2i;
  RetrievalReport train_i2t;
  // Only filled when the corpus has a validation split.
  RetrievalReport val_t2i;
  RetrievalReport val_i2t;
};

inline RetrievalReport evaluate(const ProjectionModel& model, const JointEncoding& data,
                                Direction direction) {
  std::vector<std::size_t> gt(data.size());
  for (std::size_t i = 0; i < gt.size(); ++i) gt[i] = i;
  return compute_metrics(score_all(model, data, direction), gt, direction);
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Corpus corpus = synthesize_corpus(cfg.corpus);
  const FeatureFile features = synthesize_features(corpus, cfg.features);
  const Vocabulary title_vocab = build_title_vocab(corpus);
  const Vocabulary comment_vocab = build_comment_vocab(corpus, cfg.comment_min_count);

  std::optional<AttributeEncoder> attribute;
  std::optional<ContextNetModel> contextnet;
  if (uses_attributes(cfg.mode)) {
    attribute = AttributeEncoder::build(corpus, cfg.attribute);
    ContextNetConfig cn = cfg.contextnet;
    EmbeddingTable embeddings;
    if (cfg.mode == ProjectionMode::kAttContextNet) {
      const std::array<Attribute, 4> attrs = {Attribute::kType, Attribute::kSchool,
                                              Attribute::kTimeframe, Attribute::kAuthor};
      const KnowledgeGraph graph = build_graph(corpus, attrs);
      const auto walks = sample_walks(graph, cfg.node2vec);
      embeddings = train_node2vec(walks, graph, cfg.node2vec).embeddings;
    } else {
      cn.lambda_e = 0.0;
    }
    contextnet = train_contextnet(corpus, features, embeddings, *attribute, cn).model;
  }

  const JointEncoder encoder(cfg.mode, title_vocab, comment_vocab, features,
                             attribute ? &*attribute : nullptr,
                             contextnet ? &*contextnet : nullptr);
  const JointEncoding train = encoder.encode(corpus, Split::kTrain);
  const JointEncoding val = encoder.encode(corpus, Split::kVal);

  ExperimentResult out;
  out.training = train_projection(cfg.mode, train, &val, cfg.projection);
  out.train_t2i = evaluate(out.training.model, train, Direction::kTextToImage);
  out.train_i2t = evaluate(out.training.model, train, Direction::kImageToText);
  if (val.size() > 0) {
    out.val_t2i = evaluate(out.training.model, val, Direction::kTextToImage);
    out.val_i2t = evaluate(out.training.model, val, Direction::kImageToText);
  }
  return out;
}

}  // namespace mmart::testing

#endif  // MMART_TESTS_SUPPORT_EXPERIMENT_H_
