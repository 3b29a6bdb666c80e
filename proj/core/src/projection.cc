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

#include "mmart/projection.h"

#include <cmath>
#include <cstdio>

#include "mmart/errors.h"
#include "mmart/eval_retrieval.h"

namespace mmart {

std::string_view to_string(ProjectionMode mode) {
  switch (mode) {
    case ProjectionMode::kVisLang: return "vis_lang";
    case ProjectionMode::kAtt: return "att";
    case ProjectionMode::kAttContextNet: return "att_contextnet";
  }
  return "?";
}

ProjectionMode parse_projection_mode(std::string_view name) {
  for (auto m : {ProjectionMode::kVisLang, ProjectionMode::kAtt, ProjectionMode::kAttContextNet}) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown mode: " + std::string(name));
}

// --- joint encoder --------------------------------------------------------------

JointEncoder::JointEncoder(ProjectionMode mode, const Vocabulary& title_vocab,
                           const Vocabulary& comment_vocab, const FeatureFile& visual_features,
                           const AttributeEncoder* attribute, const ContextNetModel* contextnet,
                           const FeatureFile* context_features)
    : mode_(mode),
      title_vocab_(title_vocab),
      comment_vocab_(comment_vocab),
      visual_features_(visual_features),
      attribute_(attribute),
      contextnet_(contextnet),
      context_features_(context_features ? context_features : &visual_features) {
  if (!uses_attributes(mode)) return;
  if (attribute_ == nullptr || contextnet_ == nullptr) {
    throw UsageError("mode " + std::string(to_string(mode)) +
                     " needs an attribute encoder and a ContextNet model");
  }
  if (contextnet_->attribute != attribute_->attribute()) {
    throw UsageError("config/mode mismatch: ContextNet predicts " +
                     std::string(to_string(contextnet_->attribute)) + " but the attribute is " +
                     std::string(to_string(attribute_->attribute())));
  }
  if (contextnet_->classes() != attribute_->cardinality()) {
    throw UsageError("config/mode mismatch: ContextNet has " +
                     std::to_string(contextnet_->classes()) + " classes, attribute has " +
                     std::to_string(attribute_->cardinality()) + " labels");
  }
  if (contextnet_->input_dim() != context_features_->dim()) {
    throw UsageError("config/mode mismatch: ContextNet input dim differs from its feature file");
  }
  if (mode == ProjectionMode::kAtt && contextnet_->lambda_e != 0.0) {
    throw UsageError("config/mode mismatch: mode att needs a plain classifier (lambda_e = 0)");
  }
  if (mode == ProjectionMode::kAttContextNet && !(contextnet_->lambda_e > 0.0)) {
    throw UsageError(
        "config/mode mismatch: mode att_contextnet needs a graph-informed ContextNet "
        "(lambda_e > 0)");
  }
}

std::size_t JointEncoder::visual_dim() const {
  return visual_features_.dim() + (uses_attributes(mode_) ? contextnet_->classes() : 0);
}

std::size_t JointEncoder::language_dim() const {
  return title_vocab_.size() + comment_vocab_.size() +
         (uses_attributes(mode_) ? attribute_->cardinality() : 0);
}

Vector JointEncoder::visual(const Painting& painting) const {
  const auto vis = visual_features_.find(painting.id);
  if (!vis) throw DataError("missing visual features for " + painting.id);
  if (!uses_attributes(mode_)) return Vector(vis->begin(), vis->end());
  const auto ctx_in = context_features_->find(painting.id);
  if (!ctx_in) throw DataError("missing ContextNet features for " + painting.id);
  return concat(*vis, encode_context(*contextnet_, *ctx_in));
}

SparseVector JointEncoder::language(const Painting& painting) const {
  auto lang = encode_language(painting, title_vocab_, comment_vocab_).joint;
  if (!uses_attributes(mode_)) return lang;
  return concat(lang, attribute_->encode_sparse(painting.attribute(attribute_->attribute())));
}

SparseVector JointEncoder::query(std::string_view text,
                                 std::optional<std::string_view> attribute_value) const {
  auto lang = encode_language(text, text, title_vocab_, comment_vocab_).joint;
  if (!uses_attributes(mode_)) return lang;
  return concat(lang, attribute_value ? attribute_->encode_sparse(*attribute_value)
                                      : SparseVector(attribute_->cardinality()));
}

JointEncoding JointEncoder::encode(const Corpus& corpus, Split split) const {
  JointEncoding out;
  for (const Painting* p : corpus.split_paintings(split)) {
    out.ids.push_back(p->id);
    out.visual.push_back(visual(*p));
    out.language.push_back(language(*p));
  }
  return out;
}

// --- model ------------------------------------------------------------------------

std::vector<std::span<double>> ProjectionModel::parameters() {
  return {visual_weights.data(), visual_bias, language_weights.data(), language_bias};
}

std::vector<std::size_t> ProjectionModel::parameter_shapes() const {
  return {visual_weights.size(), visual_bias.size(), language_weights.size(),
          language_bias.size()};
}

Checkpoint ProjectionModel::to_checkpoint() const {
  Checkpoint ck;
  ck.put_text("model", "projection");
  ck.put_text("mode", std::string(to_string(mode)));
  ck.put_number("margin", margin);
  ck.put("visual.weight", visual_weights);
  ck.put("visual.bias", std::span<const double>(visual_bias));
  ck.put("language.weight", language_weights);
  ck.put("language.bias", std::span<const double>(language_bias));
  return ck;
}

ProjectionModel ProjectionModel::from_checkpoint(const Checkpoint& ck) {
  if (ck.text("model") != "projection") throw DataError("checkpoint is not a projection model");
  ProjectionModel m;
  m.mode = parse_projection_mode(ck.text("mode"));
  m.margin = ck.number("margin");
  m.visual_weights = ck.matrix("visual.weight");
  m.visual_bias = ck.vector("visual.bias");
  m.language_weights = ck.matrix("language.weight");
  m.language_bias = ck.vector("language.bias");
  if (m.visual_bias.size() != m.space_dim() || m.language_weights.rows() != m.space_dim() ||
      m.language_bias.size() != m.space_dim()) {
    throw DataError("projection checkpoint has inconsistent shapes");
  }
  return m;
}

ProjectionModel init_projection(ProjectionMode mode, std::size_t visual_dim,
                                std::size_t language_dim, const ProjectionConfig& config) {
  ProjectionModel m;
  m.mode = mode;
  m.margin = config.margin;
  m.visual_weights = Matrix(config.space_dim, visual_dim);
  m.visual_bias.assign(config.space_dim, 0.0);
  m.language_weights = Matrix(config.space_dim, language_dim);
  m.language_bias.assign(config.space_dim, 0.0);
  Rng rng = Rng::stream(config.seed, "projection/init");
  glorot_uniform(m.visual_weights, rng);
  glorot_uniform(m.language_weights, rng);
  return m;
}

namespace {

// Activations of one head, kept for the backward pass.
struct HeadCache {
  Vector act;  // tanh(W x + b)
  double norm = 0.0;
  Vector out;  // act / max(norm, guard)
};

HeadCache finish_head(Vector pre) {
  HeadCache c;
  c.act = std::move(pre);
  for (double& v : c.act) v = std::tanh(v);
  c.norm = l2_norm(c.act);
  const double denom = std::max(c.norm, kNormGuard);
  c.out.resize(c.act.size());
  for (std::size_t k = 0; k < c.act.size(); ++k) c.out[k] = c.act[k] / denom;
  return c;
}

HeadCache visual_head(const ProjectionModel& m, std::span<const double> p) {
  if (p.size() != m.visual_dim()) {
    throw UsageError("p has dim " + std::to_string(p.size()) + ", model expects " +
                     std::to_string(m.visual_dim()));
  }
  Vector pre(m.space_dim());
  affine(m.visual_weights, p, m.visual_bias, pre);
  return finish_head(std::move(pre));
}

HeadCache language_head(const ProjectionModel& m, const SparseVector& q) {
  if (q.dim() != m.language_dim()) {
    throw UsageError("q has dim " + std::to_string(q.dim()) + ", model expects " +
                     std::to_string(m.language_dim()));
  }
  Vector pre(m.space_dim());
  affine(m.language_weights, q, m.language_bias, pre);
  return finish_head(std::move(pre));
}

// Gradient w.r.t. the pre-activation given the gradient w.r.t. the output.
Vector head_backward(const HeadCache& c, std::span<const double> d_out) {
  Vector d_act(c.act.size());
  if (c.norm > kNormGuard) {
    const double proj = dot(c.out, d_out);
    for (std::size_t k = 0; k < d_act.size(); ++k) {
      d_act[k] = (d_out[k] - c.out[k] * proj) / c.norm;
    }
  } else {
    for (std::size_t k = 0; k < d_act.size(); ++k) d_act[k] = d_out[k] / kNormGuard;
  }
  for (std::size_t k = 0; k < d_act.size(); ++k) d_act[k] *= 1.0 - c.act[k] * c.act[k];
  return d_act;
}

}  // namespace

Vector project_visual(const ProjectionModel& model, std::span<const double> p) {
  return visual_head(model, p).out;
}

Vector project_language(const ProjectionModel& model, const SparseVector& q) {
  return language_head(model, q).out;
}

Vector project_language(const ProjectionModel& model, std::span<const double> q) {
  if (q.size() != model.language_dim()) throw UsageError("q dimension mismatch");
  Vector pre(model.space_dim());
  affine(model.language_weights, q, model.language_bias, pre);
  return finish_head(std::move(pre)).out;
}

double similarity(std::span<const double> a, std::span<const double> b) { return dot(a, b); }

double pair_loss(double s, bool is_match, double margin) {
  return is_match ? 1.0 - s : std::max(0.0, s - margin);
}

double cosine_margin_loss(const ProjectionModel& model, std::span<const double> p,
                          const SparseVector& q, bool is_match) {
  return pair_loss(similarity(project_visual(model, p), project_language(model, q)), is_match,
                   model.margin);
}

ProjectionGradients::ProjectionGradients(const ProjectionModel& model)
    : visual_weights(model.space_dim(), model.visual_dim()),
      visual_bias(model.space_dim(), 0.0),
      language_weights(model.space_dim(), model.language_dim()),
      language_bias(model.space_dim(), 0.0) {}

void ProjectionGradients::clear() {
  visual_weights.fill(0.0);
  std::fill(visual_bias.begin(), visual_bias.end(), 0.0);
  language_weights.fill(0.0);
  std::fill(language_bias.begin(), language_bias.end(), 0.0);
}

std::vector<std::span<const double>> ProjectionGradients::tensors() const {
  return {visual_weights.data(), visual_bias, language_weights.data(), language_bias};
}

double batch_loss(const ProjectionModel& model, const JointEncoding& data,
                  std::span<const std::size_t> batch, const NegativePairs* negatives,
                  ProjectionGradients* grads) {
  const std::size_t b = batch.size();
  if (b == 0) throw UsageError("empty batch");
  std::vector<HeadCache> vis;
  std::vector<HeadCache> lang;
  vis.reserve(b);
  lang.reserve(b);
  for (std::size_t i : batch) {
    vis.push_back(visual_head(model, data.visual.at(i)));
    lang.push_back(language_head(model, data.language.at(i)));
  }

  // d(loss)/d(sim) for every scored pair.
  Matrix d_sim(b, b, 0.0);
  double total = 0.0;
  std::size_t pairs = 0;
  auto score = [&](std::size_t i, std::size_t j) {
    const bool match = i == j;
    const double s = similarity(vis[i].out, lang[j].out);
    total += pair_loss(s, match, model.margin);
    ++pairs;
    if (match) {
      d_sim(i, j) += -1.0;
    } else if (s > model.margin) {
      d_sim(i, j) += 1.0;
    }
  };
  for (std::size_t i = 0; i < b; ++i) score(i, i);
  if (negatives == nullptr) {
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < b; ++j) {
        if (i != j) score(i, j);
      }
    }
  } else {
    for (const auto& [i, j] : *negatives) {
      if (i >= b || j >= b || i == j) throw UsageError("invalid negative pair");
      score(i, j);
    }
  }
  const double mean = total / static_cast<double>(pairs);
  if (grads == nullptr) return mean;

  const double inv = 1.0 / static_cast<double>(pairs);
  const std::size_t dim = model.space_dim();
  Vector d_out(dim);
  for (std::size_t i = 0; i < b; ++i) {
    std::fill(d_out.begin(), d_out.end(), 0.0);
    for (std::size_t j = 0; j < b; ++j) {
      const double g = d_sim(i, j) * inv;
      if (g == 0.0) continue;
      for (std::size_t k = 0; k < dim; ++k) d_out[k] += g * lang[j].out[k];
    }
    const Vector d_pre = head_backward(vis[i], d_out);
    add_outer(grads->visual_weights, d_pre, data.visual[batch[i]]);
    for (std::size_t k = 0; k < dim; ++k) grads->visual_bias[k] += d_pre[k];
  }
  for (std::size_t j = 0; j < b; ++j) {
    std::fill(d_out.begin(), d_out.end(), 0.0);
    for (std::size_t i = 0; i < b; ++i) {
      const double g = d_sim(i, j) * inv;
      if (g == 0.0) continue;
      for (std::size_t k = 0; k < dim; ++k) d_out[k] += g * vis[i].out[k];
    }
    const Vector d_pre = head_backward(lang[j], d_out);
    add_outer(grads->language_weights, d_pre, data.language[batch[j]]);
    for (std::size_t k = 0; k < dim; ++k) grads->language_bias[k] += d_pre[k];
  }
  return mean;
}

namespace {

std::vector<std::vector<std::size_t>> make_batches(std::span<const std::size_t> order,
                                                   std::size_t batch) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < order.size(); start += batch) {
    const std::size_t end = std::min(order.size(), start + batch);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  // A single leftover pair has no negatives; fold it into the previous batch.
  if (out.size() > 1 && out.back().size() == 1) {
    out[out.size() - 2].push_back(out.back()[0]);
    out.pop_back();
  }
  return out;
}

NegativePairs sample_negatives(std::size_t b, std::size_t k, Rng& rng) {
  NegativePairs out;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < b; ++i) {
    others.clear();
    for (std::size_t j = 0; j < b; ++j) {
      if (j != i) others.push_back(j);
    }
    const std::size_t take = std::min(k, others.size());
    // Partial Fisher-Yates.
    for (std::size_t t = 0; t < take; ++t) {
      std::swap(others[t], others[t + rng.uniform_index(others.size() - t)]);
      out.emplace_back(i, others[t]);
    }
  }
  return out;
}

std::pair<double, double> validation_r1(const ProjectionModel& model, const JointEncoding& val) {
  std::vector<std::size_t> gt(val.size());
  for (std::size_t i = 0; i < gt.size(); ++i) gt[i] = i;
  const auto t2i = compute_metrics(score_all(model, val, Direction::kTextToImage), gt);
  const auto i2t = compute_metrics(score_all(model, val, Direction::kImageToText), gt);
  return {t2i.r1, i2t.r1};
}

}  // namespace

ProjectionTraining train_projection(ProjectionMode mode, const JointEncoding& train,
                                    const JointEncoding* validation,
                                    const ProjectionConfig& config) {
  if (config.batch < 2) throw UsageError("projection batch must be at least 2");
  if (train.size() < 2) throw UsageError("projection training needs at least two pairs");
  if (train.visual.size() != train.size() || train.language.size() != train.size()) {
    throw UsageError("joint encoding rows are misaligned");
  }
  const bool has_val = validation != nullptr && validation->size() > 0;

  ProjectionTraining result;
  result.model =
      init_projection(mode, train.visual[0].size(), train.language[0].dim(), config);
  ProjectionModel& model = result.model;

  double best = -1.0;
  if (has_val && config.select_best_val) {
    const auto [t2i, i2t] = validation_r1(model, *validation);
    best = 0.5 * (t2i + i2t);
  }
  ProjectionModel best_model = model;

  Adam adam(AdamConfig{.lr = config.lr}, model.parameter_shapes());
  ProjectionGradients grads(model);
  std::vector<std::size_t> order(train.size());
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle = Rng::stream(config.seed, "projection/shuffle", epoch);
    shuffle.shuffle(std::span<std::size_t>(order));
    const auto batches = make_batches(order, config.batch);

    double loss_sum = 0.0;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      grads.clear();
      double loss;
      if (config.negatives == 0) {
        loss = batch_loss(model, train, batches[bi], nullptr, &grads);
      } else {
        Rng rng = Rng::stream(config.seed, "projection/negatives",
                              (epoch << 20) + static_cast<std::uint64_t>(bi));
        const auto negs = sample_negatives(batches[bi].size(), config.negatives, rng);
        loss = batch_loss(model, train, batches[bi], &negs, &grads);
      }
      if (!std::isfinite(loss)) {
        throw NumericError("projection loss became non-finite at epoch " + std::to_string(epoch));
      }
      loss_sum += loss;
      adam.step(model.parameters(), grads.tensors());
    }

    ProjectionEpoch e;
    e.epoch = epoch;
    e.train_loss = loss_sum / static_cast<double>(batches.size());
    if (has_val) {
      const auto [t2i, i2t] = validation_r1(model, *validation);
      e.val_r1_t2i = t2i;
      e.val_r1_i2t = i2t;
      if (config.select_best_val && 0.5 * (t2i + i2t) > best) {
        best = 0.5 * (t2i + i2t);
        best_model = model;
        result.selected_epoch = epoch;
      }
    }
    result.trace.push_back(e);
  }

  if (has_val && config.select_best_val) {
    model = std::move(best_model);
  } else {
    result.selected_epoch = config.epochs;
  }
  result.skipped_steps = adam.skipped_steps();
  return result;
}

ProjectionTraining train_projection(const Corpus& corpus, const JointEncoder& encoder,
                                    const ProjectionConfig& config) {
  const JointEncoding train = encoder.encode(corpus, Split::kTrain);
  const JointEncoding val = encoder.encode(corpus, Split::kVal);
  return train_projection(encoder.mode(), train, &val, config);
}

std::string format_projection_trace(std::span<const ProjectionEpoch> trace) {
  std::string out = "epoch,train_loss,val_r1_t2i,val_r1_i2t\n";
  char buf[64];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,", e.epoch, e.train_loss);
    out += buf;
    if (e.val_r1_t2i) {
      std::snprintf(buf, sizeof(buf), "%.17g", *e.val_r1_t2i);
      out += buf;
    }
    out += ',';
    if (e.val_r1_i2t) {
      std::snprintf(buf, sizeof(buf), "%.17g", *e.val_r1_i2t);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mmart
