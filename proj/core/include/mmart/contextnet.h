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
// ContextNet head over fixed visual features: an attribute classifier
// (affine, ReLU, softmax) and an encoder (affine) pulled towards the
// painting's knowledge-graph embedding. Training minimizes
//
//   L = lambda_c * sum_j CE_j + lambda_e * sum_j SmoothL1_j
//
// over the train paintings with Adam.

#ifndef MMART_CONTEXTNET_H_
#define MMART_CONTEXTNET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mmart/attribute_encoder.h"
#include "mmart/checkpoint.h"
#include "mmart/corpus.h"
#include "mmart/feature_store.h"
#include "mmart/knowledge_graph.h"
#include "mmart/nn_core.h"

namespace mmart {

struct ContextNetModel {
  Attribute attribute = Attribute::kType;
  double lambda_c = 1.0;
  double lambda_e = 1.0;
  Matrix classifier_weights;  // c x d
  Vector classifier_bias;     // c
  Matrix encoder_weights;     // code_dim x d
  Vector encoder_bias;        // code_dim

  std::size_t input_dim() const { return classifier_weights.cols(); }
  std::size_t classes() const { return classifier_weights.rows(); }
  std::size_t code_dim() const { return encoder_weights.rows(); }

  // Parameter tensors in a fixed order: W_cls, b_cls, W_enc, b_enc.
  std::vector<std::span<double>> parameters();
  std::vector<std::size_t> parameter_shapes() const;

  Checkpoint to_checkpoint() const;
  static ContextNetModel from_checkpoint(const Checkpoint& checkpoint);

  bool operator==(const ContextNetModel&) const = default;
};

// All weights and biases zero.
ContextNetModel zero_contextnet(Attribute attribute, std::size_t input_dim, std::size_t classes,
                                std::size_t code_dim, double lambda_c, double lambda_e);

struct ContextNetOutput {
  Vector logits;  // pre-ReLU classifier activations
  Vector probs;   // softmax(relu(logits))
  Vector code;    // encoder output
};

// Throws UsageError on a dimension mismatch.
ContextNetOutput contextnet_forward(const ContextNetModel& model, std::span<const double> v);

struct JointLoss {
  double classification = 0.0;  // -ln(max(probs[label], 1e-12))
  double encoding = 0.0;        // mean SmoothL1 over the code dims
  double total = 0.0;           // lambda_c * classification + lambda_e * encoding
};

JointLoss joint_loss_parts(std::span<const double> probs, std::size_t true_label,
                           std::span<const double> code, std::span<const double> graph_embedding,
                           double lambda_c, double lambda_e);
double joint_loss(std::span<const double> probs, std::size_t true_label,
                  std::span<const double> code, std::span<const double> graph_embedding,
                  double lambda_c, double lambda_e);

// Gradients laid out like ContextNetModel::parameters().
struct ContextNetGradients {
  Matrix classifier_weights;
  Vector classifier_bias;
  Matrix encoder_weights;
  Vector encoder_bias;

  explicit ContextNetGradients(const ContextNetModel& model);
  void clear();
  std::vector<std::span<const double>> tensors() const;
};

// Adds d(loss)/d(params) of one sample to `grads` and returns its loss.
// When `graph_embedding` is empty the encoder term is skipped (requires
// lambda_e == 0).
JointLoss accumulate_gradients(const ContextNetModel& model, std::span<const double> v,
                               std::size_t true_label, std::span<const double> graph_embedding,
                               ContextNetGradients& grads);

struct ContextNetConfig {
  double lambda_c = 1.0;
  double lambda_e = 1.0;
  std::size_t epochs = 100;
  std::size_t batch = 32;
  double lr = 1e-3;
  // Initial classifier bias. A positive value keeps the ReLU'd logits alive
  // at the start of training.
  double classifier_bias_init = 1.0;
  std::uint64_t seed = 0;
};

// Glorot-uniform weights, classifier bias = classifier_bias_init, encoder bias 0.
ContextNetModel init_contextnet(Attribute attribute, std::size_t input_dim, std::size_t classes,
                                std::size_t code_dim, const ContextNetConfig& config);

struct ContextNetEpoch {
  std::size_t epoch = 0;
  double loss_c = 0.0;  // sum over train samples
  double loss_e = 0.0;  // sum over train samples
  double total = 0.0;   // lambda_c * loss_c + lambda_e * loss_e
};

struct ContextNetTraining {
  ContextNetModel model;
  std::vector<ContextNetEpoch> trace;  // evaluated after each epoch
  std::uint64_t skipped_steps = 0;
};

// Trains on the train split. `graph_embeddings` must hold "painting:<id>" for
// every train painting unless lambda_e == 0. Throws DataError on a missing
// feature or embedding and NumericError if the loss becomes non-finite.
ContextNetTraining train_contextnet(const Corpus& corpus, const FeatureFile& features,
                                    const EmbeddingTable& graph_embeddings,
                                    const AttributeEncoder& labels,
                                    const ContextNetConfig& config);

// Classifier probabilities (v_ctx).
Vector encode_context(const ContextNetModel& model, std::span<const double> v);
std::size_t predict_attribute(const ContextNetModel& model, std::span<const double> v);

// "epoch,loss_c,loss_e,total"
std::string format_loss_trace(std::span<const ContextNetEpoch> trace);

}  // namespace mmart

#endif  // MMART_CONTEXTNET_H_
