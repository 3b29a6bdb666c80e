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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mmart/errors.h"
#include "mmart/knowledge_graph.h"

namespace mmart {

void Node2vecConfig::validate() const {
  if (!(p > 0.0) || !(q > 0.0)) throw UsageError("node2vec: p and q must be positive");
  if (walks_per_node == 0 || walk_length == 0 || window == 0 || negatives == 0 || dim == 0 ||
      threads == 0) {
    throw UsageError("node2vec: counts must be positive");
  }
  if (window > walk_length) throw UsageError("node2vec: window exceeds walk_length");
  if (!(learning_rate > 0.0) || !(min_learning_rate > 0.0) ||
      min_learning_rate > learning_rate) {
    throw UsageError("node2vec: need 0 < min_learning_rate <= learning_rate");
  }
}

std::vector<double> transition_probabilities(const KnowledgeGraph& graph,
                                             std::optional<NodeIndex> previous,
                                             NodeIndex current, double p, double q) {
  const auto next = graph.neighbors(current);
  std::vector<double> weights(next.size(), 1.0);
  if (previous) {
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (next[k] == *previous) {
        weights[k] = 1.0 / p;
      } else if (!graph.has_edge(*previous, next[k])) {
        weights[k] = 1.0 / q;
      }
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return weights;
}

namespace {

Walk sample_walk(const KnowledgeGraph& graph, NodeIndex start, const Node2vecConfig& config,
                 Rng& rng) {
  Walk walk;
  walk.reserve(config.walk_length);
  walk.push_back(start);
  std::vector<double> cumulative;
  while (walk.size() < config.walk_length) {
    const NodeIndex cur = walk.back();
    const auto next = graph.neighbors(cur);
    if (next.empty()) break;
    if (walk.size() == 1) {
      walk.push_back(next[rng.uniform_index(next.size())]);
      continue;
    }
    const NodeIndex prev = walk[walk.size() - 2];
    cumulative.resize(next.size());
    double total = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      double w = 1.0;
      if (next[k] == prev) {
        w = 1.0 / config.p;
      } else if (!graph.has_edge(prev, next[k])) {
        w = 1.0 / config.q;
      }
      total += w;
      cumulative[k] = total;
    }
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    walk.push_back(next[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return walk;
}

}  // namespace

std::vector<Walk> sample_walks(const KnowledgeGraph& graph, const Node2vecConfig& config) {
  config.validate();
  const std::size_t n = graph.node_count();
  std::vector<Walk> walks(n * config.walks_per_node);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = Rng::stream(config.seed, "node2vec/walk", k);
      walks[k] = sample_walk(graph, static_cast<NodeIndex>(k % n), config, rng);
    }
  };
  const std::size_t threads = std::min(config.threads, std::max<std::size_t>(walks.size(), 1));
  if (threads <= 1) {
    work(0, walks.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (walks.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(walks.size(), t * chunk);
      const std::size_t end = std::min(walks.size(), begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }
  return walks;
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> ids, Matrix vectors)
    : ids_(std::move(ids)), vectors_(std::move(vectors)) {
  if (ids_.size() != vectors_.rows()) throw DataError("embedding table: row count mismatch");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) throw DataError("duplicate node id: " + ids_[i]);
  }
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return vectors_.row(it->second);
}

FeatureFile EmbeddingTable::to_feature_file() const {
  FeatureFile file(static_cast<std::uint32_t>(dim()));
  for (std::size_t i = 0; i < ids_.size(); ++i) file.add(ids_[i], vectors_.row(i));
  return file;
}

EmbeddingTable EmbeddingTable::from_feature_file(const FeatureFile& file) {
  Matrix m(file.size(), file.dim());
  for (std::size_t i = 0; i < file.size(); ++i) {
    std::copy(file.row(i).begin(), file.row(i).end(), m.row(i).begin());
  }
  return EmbeddingTable(file.ids(), std::move(m));
}

namespace {

// Plain or relaxed-atomic access to the shared parameter matrices.
template <bool kShared>
struct Access {
  static double load(const double& x) {
    if constexpr (kShared) {
      return std::atomic_ref<double>(const_cast<double&>(x)).load(std::memory_order_relaxed);
    } else {
      return x;
    }
  }
  static void store(double& x, double v) {
    if constexpr (kShared) {
      std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
    } else {
      x = v;
    }
  }
};

class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const double> counts) {
    double total = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] <= 0.0) continue;
      total += std::pow(counts[i], 0.75);
      cumulative_.push_back(total);
      nodes_.push_back(static_cast<NodeIndex>(i));
    }
  }
  NodeIndex sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return nodes_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<double> cumulative_;
  std::vector<NodeIndex> nodes_;
};

struct SgnsState {
  Matrix& center;
  Matrix& context;
  const NegativeSampler& sampler;
  const Node2vecConfig& config;
  std::size_t total_positions;
  std::atomic<std::size_t>& processed;
};

// Trains over walks[order[begin..end)]; returns (loss sum, pair count).
template <bool kShared>
std::pair<double, std::size_t> sgns_pass(SgnsState& s, std::span<const Walk> walks,
                                         std::span<const std::size_t> order, Rng& rng) {
  using A = Access<kShared>;
  const std::size_t dim = s.config.dim;
  const double lr0 = s.config.learning_rate;
  Vector grad_center(dim);
  double loss = 0.0;
  std::size_t pairs = 0;
  for (std::size_t w : order) {
    const Walk& walk = walks[w];
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const double progress = static_cast<double>(s.processed.fetch_add(1)) /
                              static_cast<double>(s.total_positions);
      const double lr = std::max(s.config.min_learning_rate, lr0 * (1.0 - progress));
      const std::size_t lo = i >= s.config.window ? i - s.config.window : 0;
      const std::size_t hi = std::min(walk.size() - 1, i + s.config.window);
      auto center = s.center.row(walk[i]);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const NodeIndex positive = walk[j];
        std::fill(grad_center.begin(), grad_center.end(), 0.0);
        for (std::size_t k = 0; k <= s.config.negatives; ++k) {
          NodeIndex target = positive;
          double label = 1.0;
          if (k > 0) {
            target = s.sampler.sample(rng);
            if (target == positive) continue;
            label = 0.0;
          }
          auto out = s.context.row(target);
          double f = 0.0;
          for (std::size_t d = 0; d < dim; ++d) f += A::load(center[d]) * A::load(out[d]);
          const double sig = sigmoid(f);
          loss += label > 0.0 ? -std::log(std::max(sig, kLogClamp))
                              : -std::log(std::max(1.0 - sig, kLogClamp));
          const double g = (label - sig) * lr;
          for (std::size_t d = 0; d < dim; ++d) {
            const double o = A::load(out[d]);
            grad_center[d] += g * o;
            A::store(out[d], o + g * A::load(center[d]));
          }
        }
        for (std::size_t d = 0; d < dim; ++d) {
          A::store(center[d], A::load(center[d]) + grad_center[d]);
        }
        ++pairs;
      }
    }
  }
  return {loss, pairs};
}

}  // namespace

Node2vecResult train_node2vec(std::span<const Walk> walks, const KnowledgeGraph& graph,
                              const Node2vecConfig& config) {
  config.validate();
  const std::size_t n = graph.node_count();
  const std::size_t dim = config.dim;

  Matrix center(n, dim);
  Matrix context(n, dim, 0.0);
  Rng init = Rng::stream(config.seed, "node2vec/init");
  const double bound = 0.5 / static_cast<double>(dim);
  for (double& v : center.data()) v = init.uniform(-bound, bound);

  Node2vecResult result;
  std::vector<double> counts(n, 0.0);
  std::size_t positions = 0;
  for (const Walk& walk : walks) {
    for (NodeIndex v : walk) {
      if (v >= n) throw DataError("walk references unknown node");
      counts[v] += 1.0;
    }
    positions += walk.size();
  }

  bool has_pairs = false;
  for (const Walk& walk : walks) has_pairs = has_pairs || walk.size() > 1;
  if (has_pairs && config.epochs > 0) {
    const NegativeSampler sampler(counts);
    std::atomic<std::size_t> processed{0};
    SgnsState state{center, context, sampler, config, positions * config.epochs, processed};
    std::vector<std::size_t> order(walks.size());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      Rng shuffle = Rng::stream(config.seed, "node2vec/order", epoch);
      shuffle.shuffle(std::span<std::size_t>(order));

      double loss = 0.0;
      std::size_t pairs = 0;
      if (config.threads <= 1) {
        Rng rng = Rng::stream(config.seed, "node2vec/negatives", epoch);
        std::tie(loss, pairs) = sgns_pass<false>(state, walks, order, rng);
      } else {
        const std::size_t t_count = config.threads;
        std::vector<std::pair<double, std::size_t>> partial(t_count);
        std::vector<std::jthread> pool;
        const std::size_t chunk = (order.size() + t_count - 1) / t_count;
        for (std::size_t t = 0; t < t_count; ++t) {
          const std::size_t begin = std::min(order.size(), t * chunk);
          const std::size_t end = std::min(order.size(), begin + chunk);
          pool.emplace_back([&, t, begin, end] {
            Rng rng = Rng::stream(config.seed, "node2vec/negatives", epoch * t_count + t);
            partial[t] = sgns_pass<true>(
                state, walks, std::span<const std::size_t>(order).subspan(begin, end - begin),
                rng);
          });
        }
        pool.clear();
        for (const auto& [l, c] : partial) {
          loss += l;
          pairs += c;
        }
      }
      result.epoch_loss.push_back(pairs > 0 ? loss / static_cast<double>(pairs) : 0.0);
    }
  }

  if (!all_finite(center.data())) throw NumericError("node2vec produced non-finite embeddings");
  result.embeddings = EmbeddingTable(graph.node_ids(), std::move(center));
  return result;
}

}  // namespace mmart
