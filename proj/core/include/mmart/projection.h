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
// Joint visual vector p = v_vis (+ v_ctx) and joint language vector
// q = v_lang (+ v_att), the two projection heads
//
//   f(p) = l2norm(tanh(W_f p + b_f)),   g(q) = l2norm(tanh(W_g q + b_g))
//
// into the shared space, and training under the cosine margin loss
//
//   match:     1 - sim(f(p_i), g(q_i))
//   non-match: max(0, sim(f(p_i), g(q_j)) - margin)

#ifndef MMART_PROJECTION_H_
#define MMART_PROJECTION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmart/attribute_encoder.h"
#include "mmart/checkpoint.h"
#include "mmart/contextnet.h"
#include "mmart/corpus.h"
#include "mmart/feature_store.h"
#include "mmart/nn_core.h"
#include "mmart/text_encoder.h"

namespace mmart {

// Which representations enter p and q.
enum class ProjectionMode {
  kVisLang,        // p = v_vis,          q = v_lang
  kAtt,            // p = v_vis + v_ctx,  q = v_lang + v_att; plain classifier (lambda_e = 0)
  kAttContextNet,  // as kAtt with a graph-informed ContextNet (lambda_e > 0)
};

std::string_view to_string(ProjectionMode mode);
ProjectionMode parse_projection_mode(std::string_view name);
inline bool uses_attributes(ProjectionMode mode) { return mode != ProjectionMode::kVisLang; }

// Encoded (p, q) pairs; row i of `visual` matches row i of `language`.
struct JointEncoding {
  std::vector<std::string> ids;
  std::vector<Vector> visual;
  std::vector<SparseVector> language;

  std::size_t size() const { return ids.size(); }
};

// Builds p and q for paintings and free-text queries. Holds references to
// its inputs, which must outlive it. The ContextNet is only read.
class JointEncoder {
 public:
  // Throws UsageError when the inputs do not fit the mode: attribute modes
  // need an attribute encoder and a ContextNet predicting the same attribute,
  // kAtt needs lambda_e == 0 and kAttContextNet needs lambda_e > 0.
  JointEncoder(ProjectionMode mode, const Vocabulary& title_vocab,
               const Vocabulary& comment_vocab, const FeatureFile& visual_features,
               const AttributeEncoder* attribute = nullptr,
               const ContextNetModel* contextnet = nullptr,
               const FeatureFile* context_features = nullptr);

  ProjectionMode mode() const { return mode_; }
  std::size_t visual_dim() const;
  std::size_t language_dim() const;

  // Throw DataError when a feature record is missing.
  Vector visual(const Painting& painting) const;
  SparseVector language(const Painting& painting) const;
  // Free text is encoded against both the title and the comment vocabulary.
  SparseVector query(std::string_view text,
                     std::optional<std::string_view> attribute_value = std::nullopt) const;

  JointEncoding encode(const Corpus& corpus, Split split) const;

 private:
  ProjectionMode mode_;
  const Vocabulary& title_vocab_;
  const Vocabulary& comment_vocab_;
  const FeatureFile& visual_features_;
  const AttributeEncoder* attribute_;
  const ContextNetModel* contextnet_;
  const FeatureFile* context_features_;
};

struct ProjectionModel {
  ProjectionMode mode = ProjectionMode::kVisLang;
  double margin = 0.1;
  Matrix visual_weights;  // space_dim x dim(p)
  Vector visual_bias;
  Matrix language_weights;  // space_dim x dim(q)
  Vector language_bias;

  std::size_t space_dim() const { return visual_weights.rows(); }
  std::size_t visual_dim() const { return visual_weights.cols(); }
  std::size_t language_dim() const { return language_weights.cols(); }

  // W_f, b_f, W_g, b_g.
  std::vector<std::span<double>> parameters();
  std::vector<std::size_t> parameter_shapes() const;

  Checkpoint to_checkpoint() const;
  static ProjectionModel from_checkpoint(const Checkpoint& checkpoint);

  bool operator==(const ProjectionModel&) const = default;
};

inline constexpr double kNormGuard = 1e-12;

// Throw UsageError on a dimension mismatch.
Vector project_visual(const ProjectionModel& model, std::span<const double> p);
Vector project_language(const ProjectionModel& model, const SparseVector& q);
Vector project_language(const ProjectionModel& model, std::span<const double> q);

// Dot product of two projected (unit or zero) vectors.
double similarity(std::span<const double> a, std::span<const double> b);
double pair_loss(double similarity, bool is_match, double margin);
double cosine_margin_loss(const ProjectionModel& model, std::span<const double> p,
                          const SparseVector& q, bool is_match);

struct ProjectionGradients {
  Matrix visual_weights;
  Vector visual_bias;
  Matrix language_weights;
  Vector language_bias;

  explicit ProjectionGradients(const ProjectionModel& model);
  void clear();
  std::vector<std::span<const double>> tensors() const;
};

// Non-matching (visual row, language row) pairs, as positions in the batch.
using NegativePairs = std::vector<std::pair<std::size_t, std::size_t>>;

// Mean pair loss over the batch: the |batch| matching pairs plus either every
// in-batch cross pair (negatives == nullptr) or the listed ones. Adds the
// gradient to `grads` when it is non-null.
double batch_loss(const ProjectionModel& model, const JointEncoding& data,
                  std::span<const std::size_t> batch, const NegativePairs* negatives,
                  ProjectionGradients* grads);

struct ProjectionConfig {
  std::size_t space_dim = 128;
  std::size_t batch = 32;
  double lr = 1e-4;
  std::size_t epochs = 10;
  double margin = 0.1;
  // 0 uses every in-batch cross pair; k > 0 samples k negatives per match.
  std::size_t negatives = 0;
  // Return the epoch with the best mean validation R@1 instead of the last.
  bool select_best_val = true;
  std::uint64_t seed = 0;
};

// Glorot-uniform weights, zero biases.
ProjectionModel init_projection(ProjectionMode mode, std::size_t visual_dim,
                                std::size_t language_dim, const ProjectionConfig& config);

struct ProjectionEpoch {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean batch loss over the epoch
  std::optional<double> val_r1_t2i;
  std::optional<double> val_r1_i2t;
};

struct ProjectionTraining {
  ProjectionModel model;
  std::vector<ProjectionEpoch> trace;
  std::size_t selected_epoch = 0;  // 0 = initialization
  std::uint64_t skipped_steps = 0;
};

// Throws UsageError when batch < 2 or the train set has fewer than two pairs,
// NumericError when the loss becomes non-finite.
ProjectionTraining train_projection(ProjectionMode mode, const JointEncoding& train,
                                    const JointEncoding* validation,
                                    const ProjectionConfig& config);
ProjectionTraining train_projection(const Corpus& corpus, const JointEncoder& encoder,
                                    const ProjectionConfig& config);

// "epoch,train_loss,val_r1_t2i,val_r1_i2t"; missing validation values are empty.
std::string format_projection_trace(std::span<const ProjectionEpoch> trace);

}  // namespace mmart

#endif  // MMART_PROJECTION_H_
