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

#include "pipeline.h"

#include <fcntl.h>
#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mmart/attribute_encoder.h"
#include "mmart/checkpoint.h"
#include "mmart/contextnet.h"
#include "mmart/corpus.h"
#include "mmart/errors.h"
#include "mmart/eval_retrieval.h"
#include "mmart/feature_store.h"
#include "mmart/knowledge_graph.h"
#include "mmart/projection.h"
#include "mmart/synthetic.h"
#include "mmart/text_encoder.h"

namespace mmart::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr std::array<Attribute, 4> kAllAttributes = {Attribute::kType, Attribute::kSchool,
                                                     Attribute::kTimeframe, Attribute::kAuthor};

std::string hex(const unsigned char* bytes, unsigned n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < n; ++i) {
    out += kDigits[bytes[i] >> 4];
    out += kDigits[bytes[i] & 0xf];
  }
  return out;
}

std::string abs_path(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("cannot write " + path.string());
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Exclusive ownership of the output directory for one stage.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".mmart.lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw UsageError("output directory is locked by another stage (remove " + path_.string() +
                       " if no stage is running)");
    }
  }
  ~DirLock() {
    ::close(fd_);
    ::unlink(path_.c_str());
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_;
};

struct Manifest {
  std::string stage;
  std::map<std::string, std::string> inputs;   // absolute path -> sha256
  std::map<std::string, std::string> outputs;  // absolute path -> sha256
};

std::vector<Manifest> read_manifests(const fs::path& dir) {
  std::vector<Manifest> out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("manifest_") && name.ends_with(".json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("corrupt run manifest " + f.string());
    Manifest m;
    m.stage = j.value("stage", "");
    for (const auto& e : j.value("inputs", nlohmann::json::array())) {
      m.inputs[e.at("path").get<std::string>()] = e.at("sha256").get<std::string>();
    }
    for (const auto& e : j.value("outputs", nlohmann::json::array())) {
      m.outputs[e.at("path").get<std::string>()] = e.at("sha256").get<std::string>();
    }
    out.push_back(std::move(m));
  }
  return out;
}

// Records what a stage read and wrote, and refuses inputs that changed after
// an earlier stage produced or consumed them.
class Run {
 public:
  Run(std::string stage, const Config& config, fs::path dir)
      : stage_(std::move(stage)),
        config_(config),
        dir_(std::move(dir)),
        start_(std::chrono::steady_clock::now()),
        manifests_(read_manifests(dir_)) {}

  fs::path artifact(std::string_view name) const { return dir_ / name; }

  // Returns the path after checking it exists and is current.
  fs::path input(const fs::path& path) {
    if (!fs::exists(path)) throw DataError("missing input: " + path.string());
    std::set<std::string> seen;
    check_current(abs_path(path), seen);
    inputs_[abs_path(path)] = hash(abs_path(path));
    return path;
  }

  void output(const fs::path& path) { outputs_.push_back(abs_path(path)); }

  void finish() {
    ordered_json j;
    j["stage"] = stage_;
    j["inputs"] = ordered_json::array();
    for (const auto& [p, h] : inputs_) j["inputs"].push_back({{"path", p}, {"sha256", h}});
    j["outputs"] = ordered_json::array();
    std::sort(outputs_.begin(), outputs_.end());
    for (const auto& p : outputs_) {
      j["outputs"].push_back({{"path", p}, {"sha256", sha256_file(p)}});
    }
    j["config_hash"] = sha256_hex(config_.canonical());
    j["seed"] = config_.get_u64("seed");
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text(artifact("manifest_" + stage_ + ".json"), j.dump(2) + "\n");
  }

 private:
  const std::string& hash(const std::string& path) {
    auto it = hash_cache_.find(path);
    if (it == hash_cache_.end()) it = hash_cache_.emplace(path, sha256_file(path)).first;
    return it->second;
  }

  // A file is current when it matches what its producing stage recorded and
  // that stage's own inputs are current.
  void check_current(const std::string& path, std::set<std::string>& seen) {
    if (!seen.insert(path).second) return;
    for (const auto& m : manifests_) {
      if (m.stage == stage_) continue;
      const auto it = m.outputs.find(path);
      if (it == m.outputs.end()) continue;
      if (!fs::exists(path) || hash(path) != it->second) {
        throw DataError("stale input: " + path + " changed after stage " + m.stage +
                        " wrote it; rerun " + m.stage);
      }
      for (const auto& [in, h] : m.inputs) {
        if (!fs::exists(in) || hash(in) != h) {
          throw DataError("stale input: " + path + " was built by " + m.stage + " from " + in +
                          ", which has changed since; rerun " + m.stage);
        }
        check_current(in, seen);
      }
    }
  }

  std::string stage_;
  const Config& config_;
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<Manifest> manifests_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
  std::map<std::string, std::string> hash_cache_;
};

char delimiter(const Config& c) {
  const std::string& d = c.get("corpus.delimiter");
  if (d == "tab") return '\t';
  if (d == "comma") return ',';
  if (d.size() == 1) return d[0];
  throw UsageError("corpus.delimiter must be 'tab', 'comma' or a single character");
}

constexpr std::array<std::pair<const char*, Split>, 3> kSplitKeys = {
    {{"corpus.train", Split::kTrain}, {"corpus.val", Split::kVal}, {"corpus.test", Split::kTest}}};

Corpus load_corpus_inputs(const Config& c, Run& run, std::ostream& log) {
  std::vector<SplitFile> files;
  files.push_back({Split::kTrain, run.input(c.path("corpus.train"))});
  for (const auto& [key, split] : kSplitKeys) {
    if (split != Split::kTrain && !c.get(key).empty()) {
      files.push_back({split, run.input(c.get(key))});
    }
  }
  LoadResult loaded = load_corpus(files, delimiter(c));
  for (const auto& d : loaded.diagnostics) log << "warning: " << d << "\n";
  return std::move(loaded.corpus);
}

fs::path context_features_path(const Config& c) {
  return c.get("features.context").empty() ? c.path("features.visual")
                                           : c.get("features.context");
}

std::string labels_file(Attribute a) { return "labels_" + std::string(to_string(a)) + ".txt"; }

Node2vecConfig node2vec_config(const Config& c) {
  Node2vecConfig n;
  n.p = c.get_double("node2vec.p");
  n.q = c.get_double("node2vec.q");
  n.walks_per_node = c.get_u64("node2vec.walks_per_node");
  n.walk_length = c.get_u64("node2vec.walk_length");
  n.window = c.get_u64("node2vec.window");
  n.negatives = c.get_u64("node2vec.negatives");
  n.epochs = c.get_u64("node2vec.epochs");
  n.learning_rate = c.get_double("node2vec.learning_rate");
  n.min_learning_rate = c.get_double("node2vec.min_learning_rate");
  n.dim = c.get_u64("node2vec.dim");
  n.threads = c.get_u64("node2vec.threads");
  n.seed = c.get_u64("seed");
  n.validate();
  return n;
}

ProjectionConfig projection_config(const Config& c) {
  ProjectionConfig p;
  p.space_dim = c.get_u64("projection.space_dim");
  p.batch = c.get_u64("projection.batch");
  p.lr = c.get_double("projection.lr");
  p.epochs = c.get_u64("projection.epochs");
  p.margin = c.get_double("projection.margin");
  p.negatives = c.get_u64("projection.negatives");
  p.select_best_val = c.get_bool("projection.select_best_val");
  p.seed = c.get_u64("seed");
  return p;
}

// Everything needed to encode (p, q) pairs. Built in place because the
// encoder holds references into the other members.
struct EncoderInputs {
  Corpus corpus;
  Vocabulary title_vocab;
  Vocabulary comment_vocab;
  std::optional<FeatureFile> visual;
  std::optional<FeatureFile> context;
  std::optional<AttributeEncoder> attribute;
  std::optional<ContextNetModel> contextnet;
  std::optional<JointEncoder> encoder;
};

std::unique_ptr<EncoderInputs> load_encoder_inputs(const Config& c, Run& run,
                                                   std::ostream& log) {
  auto in = std::make_unique<EncoderInputs>();
  const ProjectionMode mode = parse_projection_mode(c.get("mode"));
  in->corpus = load_corpus_inputs(c, run, log);
  in->title_vocab = Vocabulary::load(run.input(run.artifact("title_vocab.tsv")));
  in->comment_vocab = Vocabulary::load(run.input(run.artifact("comment_vocab.tsv")));
  in->visual = read_features(run.input(c.path("features.visual")));
  if (uses_attributes(mode)) {
    const Attribute attr = parse_attribute(c.get("attribute"));
    in->attribute = AttributeEncoder::load(run.input(run.artifact(labels_file(attr))), attr);
    const fs::path ckpt = run.artifact("contextnet.mmck");
    if (!fs::exists(ckpt)) {
      throw DataError("missing input: " + ckpt.string() + " (run train-contextnet first)");
    }
    in->contextnet = ContextNetModel::from_checkpoint(Checkpoint::load(run.input(ckpt)));
    const fs::path ctx = context_features_path(c);
    if (abs_path(ctx) == abs_path(c.path("features.visual"))) {
      in->encoder.emplace(mode, in->title_vocab, in->comment_vocab, *in->visual,
                          &*in->attribute, &*in->contextnet, &*in->visual);
    } else {
      in->context = read_features(run.input(ctx));
      in->encoder.emplace(mode, in->title_vocab, in->comment_vocab, *in->visual,
                          &*in->attribute, &*in->contextnet, &*in->context);
    }
  } else {
    in->encoder.emplace(mode, in->title_vocab, in->comment_vocab, *in->visual);
  }
  return in;
}

ProjectionModel load_projection(const Config& c, Run& run) {
  const fs::path ckpt = run.artifact("projection.mmck");
  if (!fs::exists(ckpt)) {
    throw DataError("missing model: " + ckpt.string() + " (run train-projection first)");
  }
  ProjectionModel model = ProjectionModel::from_checkpoint(Checkpoint::load(run.input(ckpt)));
  const ProjectionMode mode = parse_projection_mode(c.get("mode"));
  if (model.mode != mode) {
    throw UsageError("config/mode mismatch: model was trained in mode " +
                     std::string(to_string(model.mode)) + ", config says " +
                     std::string(to_string(mode)));
  }
  return model;
}

JointEncoding encode_eval_split(const Config& c, const EncoderInputs& in) {
  const Split split = parse_split(c.get("eval.split"));
  JointEncoding data = in.encoder->encode(in.corpus, split);
  if (data.size() == 0) {
    throw DataError("split " + std::string(to_string(split)) + " has no paintings");
  }
  return data;
}

// --- stages --------------------------------------------------------------------

void stage_synth_corpus(const Config& c, Run& run, std::ostream& out) {
  SyntheticCorpusConfig s;
  s.paintings = c.get_u64("synth.paintings");
  s.types = c.get_u64("synth.types");
  s.authors = c.get_u64("synth.authors");
  s.schools = c.get_u64("synth.schools");
  s.timeframes = c.get_u64("synth.timeframes");
  s.val_fraction = c.get_double("synth.val_fraction");
  s.test_fraction = c.get_double("synth.test_fraction");
  s.author_mention_rate = c.get_double("synth.author_mention_rate");
  s.filler_words = c.get_u64("synth.filler_words");
  s.seed = c.get_u64("seed");
  const Corpus corpus = synthesize_corpus(s);
  ordered_json j;
  j["paintings"] = corpus.size();
  for (const auto& [key, split] : kSplitKeys) {
    const std::size_t n = corpus.split(split).size();
    j[std::string(to_string(split))] = n;
    if (c.get(key).empty()) {
      if (n > 0) throw UsageError("missing input: config key " + std::string(key) + " is not set");
      continue;
    }
    const fs::path path = c.get(key);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_split(corpus, split, path, delimiter(c));
    run.output(path);
  }
  out << j.dump() << "\n";
}

void stage_synth_features(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const Corpus corpus = load_corpus_inputs(c, run, log);
  SyntheticFeatureConfig s;
  s.dim = static_cast<std::uint32_t>(c.get_u64("synth.features.dim"));
  s.attribute = parse_attribute(c.get("synth.features.attribute"));
  s.noise_sigma = c.get_double("synth.features.noise_sigma");
  s.identity_scale = c.get_double("synth.features.identity_scale");
  s.seed = c.get_u64("seed");
  const FeatureFile features = synthesize_features(corpus, s);
  const fs::path path = c.path("features.visual");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_features(features, path);
  run.output(path);
  ordered_json j;
  j["records"] = features.size();
  j["dim"] = features.dim();
  out << j.dump() << "\n";
}

void stage_build_vocab(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const Corpus corpus = load_corpus_inputs(c, run, log);
  const auto min_count = c.get_u64("vocab.comment_min_count");
  if (min_count == 0 || min_count > UINT32_MAX) {
    throw UsageError("vocab.comment_min_count must be between 1 and 2^32-1");
  }
  const Vocabulary title = build_title_vocab(corpus);
  const Vocabulary comment = build_comment_vocab(corpus, static_cast<std::uint32_t>(min_count),
                                                 parse_count_mode(c.get("vocab.count_mode")));
  title.save(run.artifact("title_vocab.tsv"));
  comment.save(run.artifact("comment_vocab.tsv"));
  run.output(run.artifact("title_vocab.tsv"));
  run.output(run.artifact("comment_vocab.tsv"));
  ordered_json labels;
  for (Attribute a : kAllAttributes) {
    const AttributeEncoder enc = AttributeEncoder::build(corpus, a);
    enc.save(run.artifact(labels_file(a)));
    run.output(run.artifact(labels_file(a)));
    labels[std::string(to_string(a))] = enc.cardinality();
  }
  ordered_json j;
  j["title_terms"] = title.size();
  j["comment_terms"] = comment.size();
  j["labels"] = labels;
  out << j.dump() << "\n";
}

void stage_build_graph(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const Corpus corpus = load_corpus_inputs(c, run, log);
  std::vector<Attribute> attrs;
  for (const auto& name : c.get_list("graph.attributes")) attrs.push_back(parse_attribute(name));
  const KnowledgeGraph graph = build_graph(corpus, attrs);
  graph.save_edge_list(run.artifact("graph.tsv"));
  run.output(run.artifact("graph.tsv"));
  ordered_json j;
  j["nodes"] = graph.node_count();
  j["edges"] = graph.edge_count();
  out << j.dump() << "\n";
}

void stage_train_node2vec(const Config& c, Run& run, std::ostream& out) {
  const KnowledgeGraph graph = KnowledgeGraph::load_edge_list(run.input(run.artifact("graph.tsv")));
  const Node2vecConfig cfg = node2vec_config(c);
  const auto walks = sample_walks(graph, cfg);
  const Node2vecResult result = train_node2vec(walks, graph, cfg);
  write_features(result.embeddings.to_feature_file(), run.artifact("node2vec.mmaf"));
  std::string trace = "epoch,loss\n";
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    trace += std::to_string(e + 1) + "," + format_double(result.epoch_loss[e]) + "\n";
  }
  write_text(run.artifact("node2vec_loss.csv"), trace);
  run.output(run.artifact("node2vec.mmaf"));
  run.output(run.artifact("node2vec_loss.csv"));
  ordered_json j;
  j["nodes"] = result.embeddings.size();
  j["dim"] = result.embeddings.dim();
  j["walks"] = walks.size();
  j["final_loss"] = result.epoch_loss.empty() ? 0.0 : result.epoch_loss.back();
  out << j.dump() << "\n";
}

void stage_train_contextnet(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const ProjectionMode mode = parse_projection_mode(c.get("mode"));
  if (!uses_attributes(mode)) {
    throw UsageError("config/mode mismatch: mode vis_lang does not use ContextNet");
  }
  ContextNetConfig cfg;
  cfg.lambda_c = c.get_double("contextnet.lambda_c");
  cfg.lambda_e = mode == ProjectionMode::kAtt ? 0.0 : c.get_double("contextnet.lambda_e");
  cfg.epochs = c.get_u64("contextnet.epochs");
  cfg.batch = c.get_u64("contextnet.batch");
  cfg.lr = c.get_double("contextnet.lr");
  cfg.classifier_bias_init = c.get_double("contextnet.classifier_bias_init");
  cfg.seed = c.get_u64("seed");
  if (mode == ProjectionMode::kAttContextNet && !(cfg.lambda_e > 0.0)) {
    throw UsageError("config/mode mismatch: mode att_contextnet needs contextnet.lambda_e > 0");
  }

  const Corpus corpus = load_corpus_inputs(c, run, log);
  const Attribute attr = parse_attribute(c.get("attribute"));
  const AttributeEncoder labels =
      AttributeEncoder::load(run.input(run.artifact(labels_file(attr))), attr);
  const FeatureFile features = read_features(run.input(context_features_path(c)));
  EmbeddingTable embeddings;
  if (cfg.lambda_e > 0.0) {
    const fs::path emb = run.artifact("node2vec.mmaf");
    if (!fs::exists(emb)) {
      throw DataError("missing input: " + emb.string() +
                      " (mode att_contextnet needs graph embeddings; run train-node2vec)");
    }
    embeddings = EmbeddingTable::from_feature_file(read_features(run.input(emb)));
  }
  const ContextNetTraining result = train_contextnet(corpus, features, embeddings, labels, cfg);
  result.model.to_checkpoint().save(run.artifact("contextnet.mmck"));
  write_text(run.artifact("contextnet_trace.csv"), format_loss_trace(result.trace));
  run.output(run.artifact("contextnet.mmck"));
  run.output(run.artifact("contextnet_trace.csv"));

  std::size_t correct = 0;
  const auto train = corpus.split_paintings(Split::kTrain);
  for (const Painting* p : train) {
    const auto label = labels.index_of(p->attribute(attr));
    if (label && predict_attribute(result.model, features.at(p->id)) == *label) ++correct;
  }
  ordered_json j;
  j["attribute"] = std::string(to_string(attr));
  j["lambda_e"] = cfg.lambda_e;
  j["epochs"] = result.trace.size();
  j["final_total"] = result.trace.empty() ? 0.0 : result.trace.back().total;
  j["train_accuracy"] = static_cast<double>(correct) / static_cast<double>(train.size());
  j["skipped_steps"] = result.skipped_steps;
  out << j.dump() << "\n";
}

void stage_train_projection(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const auto in = load_encoder_inputs(c, run, log);
  const ProjectionTraining result =
      train_projection(in->corpus, *in->encoder, projection_config(c));
  result.model.to_checkpoint().save(run.artifact("projection.mmck"));
  write_text(run.artifact("projection_trace.csv"), format_projection_trace(result.trace));
  run.output(run.artifact("projection.mmck"));
  run.output(run.artifact("projection_trace.csv"));
  ordered_json j;
  j["mode"] = std::string(to_string(result.model.mode));
  j["epochs"] = result.trace.size();
  j["selected_epoch"] = result.selected_epoch;
  j["final_train_loss"] = result.trace.empty() ? 0.0 : result.trace.back().train_loss;
  j["skipped_steps"] = result.skipped_steps;
  out << j.dump() << "\n";
}

void stage_evaluate(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const ProjectionModel model = load_projection(c, run);
  const auto in = load_encoder_inputs(c, run, log);
  const JointEncoding data = encode_eval_split(c, *in);
  std::vector<std::size_t> gt(data.size());
  std::iota(gt.begin(), gt.end(), std::size_t{0});
  ordered_json reports = ordered_json::array();
  for (Direction d : {Direction::kTextToImage, Direction::kImageToText}) {
    const RetrievalReport r = compute_metrics(score_all(model, data, d), gt, d);
    reports.push_back(ordered_json::parse(r.to_json()));
  }
  const std::string text = reports.dump() + "\n";
  write_text(run.artifact("report.json"), text);
  run.output(run.artifact("report.json"));
  out << text;
}

void stage_ten_choice(const Config& c, Run& run, std::ostream& out, std::ostream& log) {
  const ProjectionModel model = load_projection(c, run);
  const auto in = load_encoder_inputs(c, run, log);
  const JointEncoding data = encode_eval_split(c, *in);
  std::vector<std::string> types;
  for (const auto& id : data.ids) types.push_back(in->corpus.find(id)->art_type);
  const TenChoiceMode mode = parse_ten_choice_mode(c.get("ten_choice.mode"));
  const std::size_t trials = c.get_u64("ten_choice.trials");
  const double accuracy = ten_choice_eval(model, data, types, mode, trials, c.get_u64("seed"));
  ordered_json j;
  j["split"] = c.get("eval.split");
  j["mode"] = std::string(to_string(mode));
  j["trials"] = trials;
  j["accuracy"] = accuracy;
  const std::string text = j.dump() + "\n";
  write_text(run.artifact("ten_choice.json"), text);
  run.output(run.artifact("ten_choice.json"));
  out << text;
}

void stage_query(const Config& c, const StageArgs& args, Run& run, std::ostream& out,
                 std::ostream& log) {
  if (args.text.empty()) throw UsageError("query needs --text");
  const ProjectionModel model = load_projection(c, run);
  const auto in = load_encoder_inputs(c, run, log);
  if (args.attribute_value && !in->attribute) {
    throw UsageError("config/mode mismatch: --attribute-value needs an attribute mode");
  }
  const SparseVector q = in->encoder->query(
      args.text, args.attribute_value ? std::optional<std::string_view>(*args.attribute_value)
                                      : std::nullopt);
  const Vector g = project_language(model, q);

  struct Hit {
    std::string id;
    double score;
  };
  std::vector<Hit> hits;
  for (const Painting& p : in->corpus.paintings()) {
    hits.push_back({p.id, dot(g, project_visual(model, in->encoder->visual(p)))});
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const Hit& a, const Hit& b) { return a.score > b.score; });
  hits.resize(std::min<std::size_t>(hits.size(), c.get_u64("query.top_k")));

  ordered_json j;
  j["query"] = args.text;
  if (args.attribute_value) j["attribute_value"] = *args.attribute_value;
  j["results"] = ordered_json::array();
  for (const auto& h : hits) j["results"].push_back({{"id", h.id}, {"score", h.score}});
  const std::string text = j.dump() + "\n";
  write_text(run.artifact("query.json"), text);
  run.output(run.artifact("query.json"));
  out << text;
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> kNames = {
      "synth-corpus",    "synth-features",   "build-vocab", "build-graph", "train-node2vec",
      "train-contextnet", "train-projection", "evaluate",    "ten-choice",  "query"};
  return kNames;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw DataError("sha256 failed");
  }
  return hex(digest, len);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

void run_stage(std::string_view stage, const Config& config, const StageArgs& args,
               std::ostream& out, std::ostream& log) {
  const auto& names = stage_names();
  if (std::find(names.begin(), names.end(), stage) == names.end()) {
    throw UsageError("unknown subcommand: " + std::string(stage));
  }
  const fs::path dir = config.path("output_dir");
  fs::create_directories(dir);
  DirLock lock(dir);
  Run run(std::string(stage), config, dir);

  if (stage == "synth-corpus") stage_synth_corpus(config, run, out);
  else if (stage == "synth-features") stage_synth_features(config, run, out, log);
  else if (stage == "build-vocab") stage_build_vocab(config, run, out, log);
  else if (stage == "build-graph") stage_build_graph(config, run, out, log);
  else if (stage == "train-node2vec") stage_train_node2vec(config, run, out);
  else if (stage == "train-contextnet") stage_train_contextnet(config, run, out, log);
  else if (stage == "train-projection") stage_train_projection(config, run, out, log);
  else if (stage == "evaluate") stage_evaluate(config, run, out, log);
  else if (stage == "ten-choice") stage_ten_choice(config, run, out, log);
  else stage_query(config, args, run, out, log);

  run.finish();
}

}  // namespace mmart::cli
