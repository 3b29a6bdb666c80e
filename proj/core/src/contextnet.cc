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

#include <cmath>
#include <cstdio>

#include "mmart/errors.h"

namespace mmart {

std::vector<std::span<double>> ContextNetModel::parameters() {
  return {classifier_weights.data(), classifier_bias, encoder_weights.data(), encoder_bias};
}

std::vector<std::size_t> ContextNetModel::parameter_shapes() const {
  return {classifier_weights.size(), classifier_bias.size(), encoder_weights.size(),
          encoder_bias.size()};
}

Checkpoint ContextNetModel::to_checkpoint() const {
  Checkpoint ck;
  ck.put_text("model", "contextnet");
  ck.put_text("attribute", std::string(to_string(attribute)));
  ck.put_number("lambda_c", lambda_c);
  ck.put_number("lambda_e", lambda_e);
  ck.put("classifier.weight", classifier_weights);
  ck.put("classifier.bias", std::span<const double>(classifier_bias));
  ck.put("encoder.weight", encoder_weights);
  ck.put("encoder.bias", std::span<const double>(encoder_bias));
  return ck;
}

ContextNetModel ContextNetModel::from_checkpoint(const Checkpoint& ck) {
  if (ck.text("model") != "contextnet") throw DataError("checkpoint is not a ContextNet model");
  ContextNetModel m;
  m.attribute = parse_attribute(ck.text("attribute"));
  m.lambda_c = ck.number("lambda_c");
  m.lambda_e = ck.number("lambda_e");
  m.classifier_weights = ck.matrix("classifier.weight");
  m.classifier_bias = ck.vector("classifier.bias");
  m.encoder_weights = ck.matrix("encoder.weight");
  m.encoder_bias = ck.vector("encoder.bias");
  if (m.classifier_bias.size() != m.classes() || m.encoder_bias.size() != m.code_dim() ||
      m.encoder_weights.cols() != m.input_dim()) {
    throw DataError("ContextNet checkpoint has inconsistent shapes");
  }
  return m;
}

ContextNetModel zero_contextnet(Attribute attribute, std::size_t input_dim, std::size_t classes,
                                std::size_t code_dim, double lambda_c, double lambda_e) {
  ContextNetModel m;
  m.attribute = attribute;
  m.lambda_c = lambda_c;
  m.lambda_e = lambda_e;
  m.classifier_weights = Matrix(classes, input_dim);
  m.classifier_bias.assign(classes, 0.0);
  m.encoder_weights = Matrix(code_dim, input_dim);
  m.encoder_bias.assign(code_dim, 0.0);
  return m;
}

ContextNetModel init_contextnet(Attribute attribute, std::size_t input_dim, std::size_t classes,
                                std::size_t code_dim, const ContextNetConfig& config) {
  ContextNetModel m =
      zero_contextnet(attribute, input_dim, classes, code_dim, config.lambda_c, config.lambda_e);
  Rng rng = Rng::stream(config.seed, "contextnet/init");
  glorot_uniform(m.classifier_weights, rng);
  glorot_uniform(m.encoder_weights, rng);
  std::fill(m.classifier_bias.begin(), m.classifier_bias.end(), config.classifier_bias_init);
  return m;
}

ContextNetOutput contextnet_forward(const ContextNetModel& model, std::span<const double> v) {
  if (v.size() != model.input_dim()) {
    throw UsageError("ContextNet input has dim " + std::to_string(v.size()) + ", model expects " +
                     std::to_string(model.input_dim()));
  }
  ContextNetOutput out;
  out.logits.resize(model.classes());
  affine(model.classifier_weights, v, model.classifier_bias, out.logits);
  out.probs.resize(model.classes());
  for (std::size_t k = 0; k < out.logits.size(); ++k) out.probs[k] = relu(out.logits[k]);
  softmax(out.probs, out.probs);
  out.code.resize(model.code_dim());
  affine(model.encoder_weights, v, model.encoder_bias, out.code);
  return out;
}

JointLoss joint_loss_parts(std::span<const double> probs, std::size_t true_label,
                           std::span<const double> code, std::span<const double> graph_embedding,
                           double lambda_c, double lambda_e) {
  if (true_label >= probs.size()) throw UsageError("joint_loss: label out of range");
  if (code.size() != graph_embedding.size()) throw UsageError("joint_loss: code dim mismatch");
  JointLoss loss;
  loss.classification = clamped_neg_log(probs[true_label]);
  if (!code.empty()) {
    double acc = 0.0;
    for (std::size_t k = 0; k < code.size(); ++k) acc += smooth_l1(code[k] - graph_embedding[k]);
    loss.encoding = acc / static_cast<double>(code.size());
  }
  loss.total = lambda_c * loss.classification + lambda_e * loss.encoding;
  return loss;
}

double joint_loss(std::span<const double> probs, std::size_t true_label,
                  std::span<const double> code, std::span<const double> graph_embedding,
                  double lambda_c, double lambda_e) {
  return joint_loss_parts(probs, true_label, code, graph_embedding, lambda_c, lambda_e).total;
}

ContextNetGradients::ContextNetGradients(const ContextNetModel& model)
    : classifier_weights(model.classes(), model.input_dim()),
      classifier_bias(model.classes(), 0.0),
      encoder_weights(model.code_dim(), model.input_dim()),
      encoder_bias(model.code_dim(), 0.0) {}

void ContextNetGradients::clear() {
  classifier_weights.fill(0.0);
  std::fill(classifier_bias.begin(), classifier_bias.end(), 0.0);
  encoder_weights.fill(0.0);
  std::fill(encoder_bias.begin(), encoder_bias.end(), 0.0);
}

std::vector<std::span<const double>> ContextNetGradients::tensors() const {
  return {classifier_weights.data(), classifier_bias, encoder_weights.data(), encoder_bias};
}

JointLoss accumulate_gradients(const ContextNetModel& model, std::span<const double> v,
                               std::size_t true_label, std::span<const double> graph_embedding,
                               ContextNetGradients& grads) {
  const bool has_embedding = !graph_embedding.empty();
  if (!has_embedding && model.lambda_e != 0.0) {
    throw UsageError("ContextNet gradient needs a graph embedding when lambda_e != 0");
  }
  const auto out = contextnet_forward(model, v);
  const std::span<const double> code =
      has_embedding ? std::span<const double>(out.code) : std::span<const double>();
  const JointLoss loss =
      joint_loss_parts(out.probs, true_label, code, graph_embedding, model.lambda_c,
                       model.lambda_e);

  // Classifier: d(-ln p_y)/dh = p - e_y through softmax, gated by the ReLU.
  // The clamp makes the loss flat once p_y drops below 1e-12.
  Vector d_logits(model.classes(), 0.0);
  if (out.probs[true_label] >= kLogClamp) {
    for (std::size_t k = 0; k < d_logits.size(); ++k) {
      if (out.logits[k] <= 0.0) continue;
      const double target = k == true_label ? 1.0 : 0.0;
      d_logits[k] = model.lambda_c * (out.probs[k] - target);
    }
  }
  add_outer(grads.classifier_weights, d_logits, v);
  for (std::size_t k = 0; k < d_logits.size(); ++k) grads.classifier_bias[k] += d_logits[k];

  if (has_embedding) {
    const double scale = model.lambda_e / static_cast<double>(model.code_dim());
    Vector d_code(model.code_dim());
    for (std::size_t k = 0; k < d_code.size(); ++k) {
      d_code[k] = scale * smooth_l1_grad(out.code[k] - graph_embedding[k]);
    }
    add_outer(grads.encoder_weights, d_code, v);
    for (std::size_t k = 0; k < d_code.size(); ++k) grads.encoder_bias[k] += d_code[k];
  }
  return loss;
}

namespace {

struct Sample {
  std::span<const double> features;
  std::size_t label;
  std::span<const double> embedding;
};

ContextNetEpoch evaluate_epoch(const ContextNetModel& model, std::span<const Sample> samples,
                               std::size_t epoch) {
  ContextNetEpoch e;
  e.epoch = epoch;
  for (const auto& s : samples) {
    const auto out = contextnet_forward(model, s.features);
    const std::span<const double> code =
        s.embedding.empty() ? std::span<const double>() : std::span<const double>(out.code);
    const auto loss =
        joint_loss_parts(out.probs, s.label, code, s.embedding, model.lambda_c, model.lambda_e);
    e.loss_c += loss.classification;
    e.loss_e += loss.encoding;
  }
  e.total = model.lambda_c * e.loss_c + model.lambda_e * e.loss_e;
  return e;
}

}  // namespace

ContextNetTraining train_contextnet(const Corpus& corpus, const FeatureFile& features,
                                    const EmbeddingTable& graph_embeddings,
                                    const AttributeEncoder& labels,
                                    const ContextNetConfig& config) {
  if (config.batch == 0) throw UsageError("ContextNet batch must be positive");
  if (labels.cardinality() == 0) throw DataError("ContextNet needs at least one label");
  const bool use_graph = config.lambda_e != 0.0;
  const std::size_t code_dim = use_graph ? graph_embeddings.dim() : 128;
  if (use_graph && code_dim == 0) throw DataError("graph embeddings are empty");

  std::vector<Sample> samples;
  for (const Painting* p : corpus.split_paintings(Split::kTrain)) {
    const auto f = features.find(p->id);
    if (!f) throw DataError("missing feature record for train painting " + p->id);
    const auto label = labels.index_of(p->attribute(labels.attribute()));
    if (!label) continue;  // cannot happen for labels built from this corpus
    std::span<const double> emb;
    if (use_graph) {
      const auto e = graph_embeddings.find(painting_node(p->id));
      if (!e) throw DataError("missing graph embedding for train painting " + p->id);
      emb = *e;
    }
    samples.push_back({*f, *label, emb});
  }
  if (samples.empty()) throw DataError("ContextNet has no train samples");

  ContextNetTraining result;
  result.model =
      init_contextnet(labels.attribute(), features.dim(), labels.cardinality(), code_dim, config);
  ContextNetModel& model = result.model;

  Adam adam(AdamConfig{.lr = config.lr}, model.parameter_shapes());
  ContextNetGradients grads(model);
  std::vector<std::size_t> order(samples.size());
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng = Rng::stream(config.seed, "contextnet/shuffle", epoch);
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      grads.clear();
      for (std::size_t k = start; k < end; ++k) {
        const Sample& s = samples[order[k]];
        accumulate_gradients(model, s.features, s.label, s.embedding, grads);
      }
      adam.step(model.parameters(), grads.tensors());
    }
    auto e = evaluate_epoch(model, samples, epoch);
    if (!std::isfinite(e.total)) {
      throw NumericError("ContextNet loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.trace.push_back(e);
  }
  result.skipped_steps = adam.skipped_steps();
  return result;
}

Vector encode_context(const ContextNetModel& model, std::span<const double> v) {
  return contextnet_forward(model, v).probs;
}

std::size_t predict_attribute(const ContextNetModel& model, std::span<const double> v) {
  const auto probs = encode_context(model, v);
  return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

std::string format_loss_trace(std::span<const ContextNetEpoch> trace) {
  std::string out = "epoch,loss_c,loss_e,total\n";
  char buf[128];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", e.epoch, e.loss_c, e.loss_e,
                  e.total);
    out += buf;
  }
  return out;
}

}  // namespace mmart
