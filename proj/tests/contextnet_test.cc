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

#include "mmart/contextnet.h"

#include <gtest/gtest.h>

#include <cmath>

#include "gradient_instances.h"
#include "mmart/errors.h"
#include "mmart/synthetic.h"
#include "test_util.h"

namespace mmart {
namespace {

EmbeddingTable random_embeddings(const Corpus& corpus, std::size_t dim, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const Painting& p : corpus.paintings()) ids.push_back(painting_node(p.id));
  Matrix m(ids.size(), dim);
  Rng rng(seed);
  for (double& x : m.data()) x = 0.5 * rng.normal();
  return EmbeddingTable(std::move(ids), std::move(m));
}

struct ZeroNoiseTask {
  Corpus corpus;
  FeatureFile features;
  AttributeEncoder labels;
  EmbeddingTable embeddings;
};

ZeroNoiseTask zero_noise_task() {
  Corpus c = synthesize_corpus({.paintings = 64, .types = 4, .authors = 8, .seed = 11});
  FeatureFile f = synthesize_features(c, {.dim = 16, .attribute = Attribute::kType});
  AttributeEncoder labels = AttributeEncoder::build(c, Attribute::kType);
  EmbeddingTable emb = random_embeddings(c, 8, 3);
  return {std::move(c), std::move(f), std::move(labels), std::move(emb)};
}

TEST(ContextNetForward, ZeroModelIsUniform) {
  const ContextNetModel m = zero_contextnet(Attribute::kType, 5, 4, 128, 1.0, 1.0);
  const auto out = contextnet_forward(m, Vector{1, 2, 3, 4, 5});
  for (double p : out.probs) EXPECT_DOUBLE_EQ(p, 0.25);
  for (double c : out.code) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(out.code.size(), 128u);
}

TEST(ContextNetForward, ReluThenSoftmax) {
  ContextNetModel m = zero_contextnet(Attribute::kType, 1, 2, 4, 1.0, 1.0);
  m.classifier_bias = {3.0, -1.0};
  const auto out = contextnet_forward(m, Vector{0.0});
  EXPECT_NEAR(out.probs[0], 0.952574, 1e-6);
  EXPECT_NEAR(out.probs[1], 0.047426, 1e-6);
  EXPECT_NEAR(out.probs[0], 1.0 / (1.0 + std::exp(-3.0)), 1e-15);
}

TEST(ContextNetForward, SingleClassIsCertain) {
  ContextNetModel m = zero_contextnet(Attribute::kType, 2, 1, 4, 1.0, 1.0);
  m.classifier_weights(0, 0) = 7.0;
  EXPECT_EQ(contextnet_forward(m, Vector{1.0, -3.0}).probs, (Vector{1.0}));
}

TEST(ContextNetForward, DimensionMismatch) {
  const ContextNetModel m = zero_contextnet(Attribute::kType, 3, 2, 4, 1.0, 1.0);
  EXPECT_THROW(contextnet_forward(m, Vector{1.0}), UsageError);
}

TEST(ContextNetForward, ProbabilitiesSumToOne) {
  ContextNetConfig cfg;
  cfg.seed = 5;
  const ContextNetModel m = init_contextnet(Attribute::kType, 10, 7, 16, cfg);
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    Vector v(10);
    for (double& x : v) x = 3.0 * rng.normal();
    const auto out = contextnet_forward(m, v);
    double sum = 0.0;
    for (double p : out.probs) {
      EXPECT_GE(p, 0.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(JointLoss, PerfectPredictionIsZero) {
  const Vector code(128, 0.3);
  EXPECT_EQ(joint_loss(Vector{0.0, 1.0}, 1, code, code, 1.0, 1.0), 0.0);
}

TEST(JointLoss, HandComputedExample) {
  Vector code(128, 0.0);
  const Vector emb(128, 0.0);
  code[0] = 0.5;
  const auto parts = joint_loss_parts(Vector{0.5, 0.5}, 0, code, emb, 1.0, 1.0);
  EXPECT_NEAR(parts.classification, std::log(2.0), 1e-15);
  EXPECT_NEAR(parts.encoding, 0.125 / 128.0, 1e-15);
  EXPECT_NEAR(parts.total, 0.6941237430599453, 1e-12);
}

TEST(JointLoss, HuberBranch) {
  Vector code(128, 0.0);
  const Vector emb(128, 0.0);
  code[5] = 2.0;
  const auto parts = joint_loss_parts(Vector{1.0}, 0, code, emb, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(parts.encoding, 1.5 / 128.0);
  EXPECT_NEAR(parts.encoding, 0.011719, 1e-6);
}

TEST(JointLoss, ZeroProbabilityIsClamped) {
  const Vector code(4, 0.0);
  const double loss = joint_loss(Vector{1.0, 0.0}, 1, code, code, 1.0, 0.0);
  EXPECT_NEAR(loss, -std::log(1e-12), 1e-9);
}

TEST(JointLoss, NonNegativeAndScalesWithLambdas) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    Vector probs(3);
    double s = 0.0;
    for (double& p : probs) s += (p = rng.uniform() + 1e-3);
    for (double& p : probs) p /= s;
    Vector code(8), emb(8);
    for (double& x : code) x = 2.0 * rng.normal();
    for (double& x : emb) x = 2.0 * rng.normal();
    const std::size_t label = rng.uniform_index(3);
    const double base = joint_loss(probs, label, code, emb, 0.7, 1.3);
    EXPECT_GE(base, 0.0);
    EXPECT_NEAR(joint_loss(probs, label, code, emb, 0.7 * 4.0, 1.3 * 4.0), 4.0 * base, 1e-12);
  }
}

TEST(ContextNetGradients, MatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double err = testing::contextnet_gradient_error(seed);
    EXPECT_LT(err, 1e-3) << "instance " << seed;
  }
}

TEST(ContextNetGradients, NoEmbeddingRequiresZeroLambdaE) {
  const ContextNetModel m = zero_contextnet(Attribute::kType, 2, 2, 4, 1.0, 1.0);
  ContextNetGradients g(m);
  EXPECT_THROW(accumulate_gradients(m, Vector{1.0, 0.0}, 0, {}, g), UsageError);
}

TEST(TrainContextNet, ZeroNoiseReachesFullAccuracy) {
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.epochs = 100;
  cfg.lr = 1e-2;
  cfg.seed = 1;
  const auto r = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  std::size_t correct = 0, total = 0;
  for (const Painting* p : task.corpus.split_paintings(Split::kTrain)) {
    const auto predicted = predict_attribute(r.model, task.features.at(p->id));
    correct += predicted == *task.labels.index_of(p->art_type) ? 1 : 0;
    ++total;
  }
  EXPECT_EQ(correct, total);
}

TEST(TrainContextNet, LossTraceNearlyMonotone) {
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.epochs = 100;
  cfg.lr = 1e-2;
  cfg.seed = 2;
  const auto r = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  ASSERT_EQ(r.trace.size(), 100u);
  int upticks = 0;
  for (std::size_t e = 1; e < r.trace.size(); ++e) {
    const double prev = r.trace[e - 1].total;
    const double cur = r.trace[e].total;
    if (cur > prev) {
      ++upticks;
      EXPECT_LT((cur - prev) / prev, 0.01) << "epoch " << r.trace[e].epoch;
    }
  }
  EXPECT_LE(upticks, 2);
}

TEST(TrainContextNet, ZeroLambdaEIsPureClassification) {
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.lambda_e = 0.0;
  cfg.epochs = 5;
  cfg.seed = 3;
  const auto r =
      train_contextnet(task.corpus, task.features, EmbeddingTable{}, task.labels, cfg);
  for (const auto& e : r.trace) EXPECT_EQ(e.total, cfg.lambda_c * e.loss_c);
}

TEST(TrainContextNet, ZeroEpochsReturnsInitialization) {
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.epochs = 0;
  cfg.seed = 4;
  const auto r = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.model, init_contextnet(Attribute::kType, 16, 4, 8, cfg));
}

TEST(TrainContextNet, DeterministicInSeed) {
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 9;
  const auto a = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  const auto b = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  EXPECT_EQ(a.model.to_checkpoint().encode(), b.model.to_checkpoint().encode());
}

TEST(TrainContextNet, RescaledLambdasKeepPredictions) {
  // Adam is invariant to a constant gradient scale, so rescaling both
  // weights leaves the trajectory and the argmax predictions unchanged.
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.epochs = 20;
  cfg.lr = 1e-2;
  cfg.seed = 6;
  const auto a = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  cfg.lambda_c *= 3.0;
  cfg.lambda_e *= 3.0;
  const auto b = train_contextnet(task.corpus, task.features, task.embeddings, task.labels, cfg);
  EXPECT_NEAR(b.trace.front().total, 3.0 * a.trace.front().total,
              1e-6 * b.trace.front().total);
  for (const Painting& p : task.corpus.paintings()) {
    const auto v = task.features.at(p.id);
    EXPECT_EQ(predict_attribute(a.model, v), predict_attribute(b.model, v));
  }
}

TEST(TrainContextNet, MissingInputs) {
  const auto task = zero_noise_task();
  ContextNetConfig cfg;
  cfg.epochs = 1;
  EXPECT_THROW(train_contextnet(task.corpus, FeatureFile(16), task.embeddings, task.labels, cfg),
               DataError);
  EXPECT_THROW(train_contextnet(task.corpus, task.features,
                                random_embeddings(Corpus({testing::make_painting(
                                                      "zz", "t", "c", "x")}),
                                                  8, 1),
                                task.labels, cfg),
               DataError);
}

TEST(EncodeContext, ZeroModelUniformAndArgmax) {
  ContextNetModel m = zero_contextnet(Attribute::kType, 3, 2, 4, 1.0, 1.0);
  EXPECT_EQ(encode_context(m, Vector{1, 2, 3}), (Vector{0.5, 0.5}));
  m.classifier_bias = {std::log(0.7 / 0.3), 0.0};
  const Vector probs = encode_context(m, Vector{0, 0, 0});
  EXPECT_NEAR(probs[0], 0.7, 1e-12);
  EXPECT_EQ(predict_attribute(m, Vector{0, 0, 0}), 0u);
}

TEST(ContextNetModel, CheckpointRoundTrip) {
  testing::TempDir dir;
  ContextNetConfig cfg;
  cfg.lambda_e = 0.25;
  cfg.seed = 12;
  const ContextNetModel m = init_contextnet(Attribute::kSchool, 6, 3, 5, cfg);
  m.to_checkpoint().save(dir / "m.mmck");
  const auto back = ContextNetModel::from_checkpoint(Checkpoint::load(dir / "m.mmck"));
  EXPECT_EQ(back, m);
}

TEST(ContextNetModel, LossTraceCsv) {
  const std::vector<ContextNetEpoch> trace = {{1, 2.5, 0.5, 3.0}};
  EXPECT_EQ(format_loss_trace(trace), "epoch,loss_c,loss_e,total\n1,2.5,0.5,3\n");
}

}  // namespace
}  // namespace mmart
