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
// The artistic knowledge graph (train paintings linked to their attribute
// values) and node2vec embeddings learnt over it: second-order biased random
// walks followed by skip-gram with negative sampling.

#ifndef MMART_KNOWLEDGE_GRAPH_H_
#define MMART_KNOWLEDGE_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mmart/corpus.h"
#include "mmart/feature_store.h"
#include "mmart/nn_core.h"

namespace mmart {

using NodeIndex = std::uint32_t;

// Undirected, unweighted graph over string node ids. Neighbor lists are kept
// sorted by node index.
class KnowledgeGraph {
 public:
  // Returns the index of `id`, adding the node if it is new.
  NodeIndex add_node(std::string_view id);
  // Adds the undirected edge a-b. Self-loops throw UsageError; repeated edges
  // are ignored.
  void add_edge(NodeIndex a, NodeIndex b);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& node_id(NodeIndex i) const { return ids_[i]; }
  const std::vector<std::string>& node_ids() const { return ids_; }
  std::optional<NodeIndex> find(std::string_view id) const;
  std::span<const NodeIndex> neighbors(NodeIndex i) const { return adjacency_[i]; }
  bool has_edge(NodeIndex a, NodeIndex b) const;

  // "src<TAB>dst" per edge, each undirected edge once, in insertion order.
  std::string format_edge_list() const;
  void save_edge_list(const std::filesystem::path& path) const;
  // Nodes are numbered in order of first appearance.
  static KnowledgeGraph parse_edge_list(std::string_view text);
  static KnowledgeGraph load_edge_list(const std::filesystem::path& path);

  bool operator==(const KnowledgeGraph& o) const {
    return ids_ == o.ids_ && adjacency_ == o.adjacency_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
};

std::string painting_node(std::string_view painting_id);
std::string attribute_node(Attribute attribute, std::string_view value);

// One node per train painting and per distinct (attribute, value) pair, with
// an edge from each painting to each of its values. Nodes are numbered as
// they are first met: a painting, then its new value nodes.
//
// Throws UsageError for an empty attribute set and DataError for an empty
// train split.
KnowledgeGraph build_graph(const Corpus& corpus, std::span<const Attribute> attributes);

struct Node2vecConfig {
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 40;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::size_t dim = 128;
  // Worker threads. Walk sampling stays deterministic for any value; SGD
  // with more than one thread runs lock-free and is not reproducible.
  std::size_t threads = 1;
  std::uint64_t seed = 0;

  void validate() const;  // throws UsageError
};

using Walk = std::vector<NodeIndex>;

// Probability of stepping to each neighbor of `current` (aligned with
// graph.neighbors(current)) given the previous node. Without a previous node
// the step is uniform.
std::vector<double> transition_probabilities(const KnowledgeGraph& graph,
                                             std::optional<NodeIndex> previous,
                                             NodeIndex current, double p, double q);

// walks_per_node rounds; in each round one walk starts at every node, in node
// order. Walk k uses its own random stream, so the result depends only on
// the seed.
std::vector<Walk> sample_walks(const KnowledgeGraph& graph, const Node2vecConfig& config);

// Node vectors, one row per graph node.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> ids, Matrix vectors);

  std::size_t dim() const { return vectors_.cols(); }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Matrix& vectors() const { return vectors_; }
  std::optional<std::span<const double>> find(std::string_view id) const;
  std::span<const double> row(std::size_t i) const { return vectors_.row(i); }

  // Stored in the MMAF format with node ids as record ids.
  FeatureFile to_feature_file() const;
  static EmbeddingTable from_feature_file(const FeatureFile& file);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix vectors_;
};

struct Node2vecResult {
  EmbeddingTable embeddings;
  std::vector<double> epoch_loss;  // mean loss per (center, context) pair
};

// Skip-gram with negative sampling over (center, context) pairs within
// `window`. Negatives follow the walk unigram distribution raised to 0.75;
// the learning rate decays linearly to its floor. Center vectors start
// uniform in [-0.5/dim, 0.5/dim], context vectors at zero.
Node2vecResult train_node2vec(std::span<const Walk> walks, const KnowledgeGraph& graph,
                              const Node2vecConfig& config);

}  // namespace mmart

#endif  // MMART_KNOWLEDGE_GRAPH_H_
