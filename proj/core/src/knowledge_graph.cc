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

#include "binary_io.h"
#include "mmart/errors.h"
#include "mmart/knowledge_graph.h"

namespace mmart {

NodeIndex KnowledgeGraph::add_node(std::string_view id) {
  auto [it, inserted] = index_.emplace(std::string(id), static_cast<NodeIndex>(ids_.size()));
  if (inserted) {
    ids_.emplace_back(id);
    adjacency_.emplace_back();
  }
  return it->second;
}

void KnowledgeGraph::add_edge(NodeIndex a, NodeIndex b) {
  if (a >= ids_.size() || b >= ids_.size()) throw UsageError("add_edge: unknown node");
  if (a == b) throw UsageError("self-loop on " + ids_[a]);
  auto insert = [this](NodeIndex from, NodeIndex to) {
    auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to);
    if (it != adj.end() && *it == to) return false;
    adj.insert(it, to);
    return true;
  };
  if (insert(a, b)) {
    insert(b, a);
    edges_.emplace_back(a, b);
  }
}

std::optional<NodeIndex> KnowledgeGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool KnowledgeGraph::has_edge(NodeIndex a, NodeIndex b) const {
  return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

std::string KnowledgeGraph::format_edge_list() const {
  std::string out;
  for (const auto& [a, b] : edges_) {
    out += ids_[a];
    out += '\t';
    out += ids_[b];
    out += '\n';
  }
  return out;
}

void KnowledgeGraph::save_edge_list(const std::filesystem::path& path) const {
  io::write_file(path, format_edge_list());
}

KnowledgeGraph KnowledgeGraph::parse_edge_list(std::string_view text) {
  KnowledgeGraph g;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size()) {
      throw DataError("edge list line " + std::to_string(line_no) + ": expected src<TAB>dst");
    }
    const NodeIndex a = g.add_node(line.substr(0, tab));
    const NodeIndex b = g.add_node(line.substr(tab + 1));
    if (a == b) throw DataError("edge list line " + std::to_string(line_no) + ": self-loop");
    g.add_edge(a, b);
  }
  return g;
}

KnowledgeGraph KnowledgeGraph::load_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(io::read_file(path));
}

std::string painting_node(std::string_view painting_id) {
  return "painting:" + std::string(painting_id);
}

std::string attribute_node(Attribute attribute, std::string_view value) {
  return std::string(to_string(attribute)) + ":" + std::string(value);
}

KnowledgeGraph build_graph(const Corpus& corpus, std::span<const Attribute> attributes) {
  if (attributes.empty()) throw UsageError("build_graph: empty attribute set");
  const auto& train = corpus.split(Split::kTrain);
  if (train.empty()) throw DataError("build_graph: train split is empty");

  std::vector<Attribute> attrs(attributes.begin(), attributes.end());
  std::sort(attrs.begin(), attrs.end());
  attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());

  KnowledgeGraph g;
  for (std::size_t i : train) {
    const Painting& p = corpus[i];
    const NodeIndex pn = g.add_node(painting_node(p.id));
    for (Attribute a : attrs) g.add_edge(pn, g.add_node(attribute_node(a, p.attribute(a))));
  }
  return g;
}

}  // namespace mmart
