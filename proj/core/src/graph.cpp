/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ugformer/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "ugformer/error.hpp"
#include "ugformer/log.hpp"

namespace ugformer {
namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path, bool mandatory) {
  std::ifstream in(path);
  if (!in) {
    if (mandatory) throw LoadError("missing dataset file: " + path.string());
    return {};
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  // Trailing blank lines are tolerated, interior ones are not.
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
    lines.pop_back();
  }
  return lines;
}

// Parses one line of comma/whitespace separated integers.
std::vector<std::int64_t> parse_ints(const std::string& line, const std::string& file,
                                     std::size_t line_no) {
  std::vector<std::int64_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == ',')) ++p;
    if (p == end) break;
    if (*p == '+') ++p;
    std::int64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) throw FormatError(file, line_no, "expected an integer in '" + line + "'");
    out.push_back(v);
    p = next;
  }
  return out;
}

std::int64_t parse_single(const std::string& line, const std::string& file, std::size_t line_no) {
  auto v = parse_ints(line, file, line_no);
  if (v.size() != 1) throw FormatError(file, line_no, "expected exactly one integer");
  return v.front();
}

std::vector<double> one_hot_rows(std::span<const std::size_t> hot, std::size_t width) {
  std::vector<double> rows(hot.size() * width, 0.0);
  for (std::size_t i = 0; i < hot.size(); ++i) rows[i * width + hot[i]] = 1.0;
  return rows;
}

}  // namespace

Graph Graph::from_edges(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges,
                        std::vector<double> features, std::size_t feature_dim, int label,
                        std::optional<std::vector<int>> node_labels) {
  if (features.size() != num_nodes * feature_dim) {
    throw DimensionError("feature matrix has " + std::to_string(features.size()) +
                         " entries, expected " + std::to_string(num_nodes) + "x" +
                         std::to_string(feature_dim));
  }
  if (node_labels && node_labels->size() != num_nodes) {
    throw DimensionError("node label count does not match node count");
  }
  Graph g;
  g.adjacency_.resize(num_nodes);
  for (auto [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw ContractError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                          ") out of range for " + std::to_string(num_nodes) + " nodes");
    }
    if (u == v) continue;
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  g.features_ = std::move(features);
  g.feature_dim_ = feature_dim;
  g.label_ = label;
  g.node_labels_ = std::move(node_labels);
  return g;
}

std::size_t Graph::num_edges() const {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

Graph Graph::with_features(std::vector<double> features, std::size_t feature_dim) const {
  if (features.size() != num_nodes() * feature_dim) {
    throw DimensionError("replacement feature matrix has wrong size");
  }
  Graph g = *this;
  g.features_ = std::move(features);
  g.feature_dim_ = feature_dim;
  return g;
}

Graph Graph::relabeled(std::span<const NodeId> perm) const {
  const std::size_t n = num_nodes();
  if (perm.size() != n) throw ContractError("permutation length does not match node count");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : adjacency_[v]) {
      if (v < u) edges.emplace_back(perm[v], perm[u]);
    }
  }
  std::vector<double> features(features_.size());
  std::optional<std::vector<int>> labels;
  if (node_labels_) labels.emplace(n);
  for (NodeId v = 0; v < n; ++v) {
    std::copy_n(features_.begin() + v * feature_dim_, feature_dim_,
                features.begin() + perm[v] * feature_dim_);
    if (labels) (*labels)[perm[v]] = (*node_labels_)[v];
  }
  return from_edges(n, edges, std::move(features), feature_dim_, label_, std::move(labels));
}

std::string to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::kNodeLabels:
      return "node-labels";
    case FeatureMode::kDegreeOneHot:
      return "degree-onehot";
    case FeatureMode::kConstant:
      return "constant";
  }
  return "unknown";
}

FeatureMode feature_mode_from_string(const std::string& text) {
  if (text == "node-labels") return FeatureMode::kNodeLabels;
  if (text == "degree-onehot" || text == "degree") return FeatureMode::kDegreeOneHot;
  if (text == "constant") return FeatureMode::kConstant;
  throw ConfigError("unknown feature mode '" + text + "'");
}

std::size_t Dataset::total_nodes() const {
  std::size_t total = 0;
  for (const auto& g : graphs) total += g.num_nodes();
  return total;
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (const auto& g : graphs) ++counts.at(static_cast<std::size_t>(g.label()));
  return counts;
}

Dataset load_tud_dataset(const std::filesystem::path& dir, const std::string& name) {
  const auto file = [&](const char* suffix) { return dir / (name + suffix); };
  const auto indicator_path = file("_graph_indicator.txt");
  const auto labels_path = file("_graph_labels.txt");
  const auto edges_path = file("_A.txt");
  const auto node_labels_path = file("_node_labels.txt");

  const auto indicator_lines = read_lines(indicator_path, true);
  const auto label_lines = read_lines(labels_path, true);
  const auto edge_lines = read_lines(edges_path, true);
  const auto node_label_lines = read_lines(node_labels_path, false);

  const std::size_t n = indicator_lines.size();
  const std::size_t num_graphs = label_lines.size();
  if (num_graphs == 0) throw FormatError(labels_path.string() + ": no graph labels");

  // Global node -> (graph, local index).
  std::vector<std::size_t> graph_of(n);
  std::vector<NodeId> local_of(n);
  std::vector<std::size_t> graph_sizes(num_graphs, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto gid = parse_single(indicator_lines[i], indicator_path.string(), i + 1);
    if (gid < 1 || static_cast<std::size_t>(gid) > num_graphs) {
      throw FormatError(indicator_path.string(), i + 1,
                        "graph id " + std::to_string(gid) + " outside [1, " +
                            std::to_string(num_graphs) + "]");
    }
    graph_of[i] = static_cast<std::size_t>(gid - 1);
    local_of[i] = static_cast<NodeId>(graph_sizes[graph_of[i]]++);
  }
  for (std::size_t g = 0; g < num_graphs; ++g) {
    if (graph_sizes[g] == 0) {
      throw FormatError(indicator_path.string() + ": graph " + std::to_string(g + 1) +
                        " has no nodes");
    }
  }

  std::vector<std::int64_t> raw_labels(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    raw_labels[g] = parse_single(label_lines[g], labels_path.string(), g + 1);
  }
  std::vector<std::int64_t> label_values = raw_labels;
  std::sort(label_values.begin(), label_values.end());
  label_values.erase(std::unique(label_values.begin(), label_values.end()), label_values.end());

  std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(num_graphs);
  for (std::size_t line = 0; line < edge_lines.size(); ++line) {
    if (edge_lines[line].find_first_not_of(" \t") == std::string::npos) continue;
    const auto pair = parse_ints(edge_lines[line], edges_path.string(), line + 1);
    if (pair.size() != 2) throw FormatError(edges_path.string(), line + 1, "expected two node ids");
    for (auto id : pair) {
      if (id < 1 || static_cast<std::size_t>(id) > n) {
        throw FormatError(edges_path.string(), line + 1,
                          "node id " + std::to_string(id) + " outside [1, " + std::to_string(n) + "]");
      }
    }
    const auto a = static_cast<std::size_t>(pair[0] - 1);
    const auto b = static_cast<std::size_t>(pair[1] - 1);
    if (graph_of[a] != graph_of[b]) {
      throw FormatError(edges_path.string(), line + 1, "edge joins nodes of different graphs");
    }
    edges[graph_of[a]].emplace_back(local_of[a], local_of[b]);
  }

  std::size_t asymmetric = 0;
  for (auto& list : edges) {
    auto sorted = list;
    std::sort(sorted.begin(), sorted.end());
    for (auto [u, v] : sorted) {
      if (u != v && !std::binary_search(sorted.begin(), sorted.end(), std::pair{v, u})) ++asymmetric;
    }
  }
  if (asymmetric > 0) {
    log_warning(edges_path.string() + ": " + std::to_string(asymmetric) +
                " directed edges without a reverse entry; symmetrized");
  }

  Dataset ds;
  ds.name = name;
  ds.num_classes = label_values.size();
  ds.label_values = label_values;

  std::vector<std::vector<int>> node_labels(num_graphs);
  const bool has_node_labels = !node_label_lines.empty();
  if (has_node_labels) {
    if (node_label_lines.size() != n) {
      throw FormatError(node_labels_path.string() + ": " + std::to_string(node_label_lines.size()) +
                        " node labels for " + std::to_string(n) + " nodes");
    }
    std::vector<int> values;
    for (std::size_t g = 0; g < num_graphs; ++g) node_labels[g].resize(graph_sizes[g]);
    for (std::size_t i = 0; i < n; ++i) {
      const auto lbl = static_cast<int>(parse_single(node_label_lines[i], node_labels_path.string(), i + 1));
      node_labels[graph_of[i]][local_of[i]] = lbl;
      values.push_back(lbl);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    ds.node_label_values = values;
    ds.feature_mode = FeatureMode::kNodeLabels;
  } else {
    ds.feature_mode = FeatureMode::kConstant;
  }

  ds.graphs.reserve(num_graphs);
  for (std::size_t g = 0; g < num_graphs; ++g) {
    const auto class_index = static_cast<int>(
        std::lower_bound(label_values.begin(), label_values.end(), raw_labels[g]) - label_values.begin());
    std::vector<double> features;
    std::size_t dim = 1;
    std::optional<std::vector<int>> labels;
    if (has_node_labels) {
      dim = ds.node_label_values.size();
      std::vector<std::size_t> hot(graph_sizes[g]);
      for (std::size_t v = 0; v < hot.size(); ++v) {
        hot[v] = static_cast<std::size_t>(
            std::lower_bound(ds.node_label_values.begin(), ds.node_label_values.end(), node_labels[g][v]) -
            ds.node_label_values.begin());
      }
      features = one_hot_rows(hot, dim);
      labels = std::move(node_labels[g]);
    } else {
      features.assign(graph_sizes[g], 1.0);
    }
    ds.graphs.push_back(Graph::from_edges(graph_sizes[g], edges[g], std::move(features), dim,
                                          class_index, std::move(labels)));
  }
  return ds;
}

void write_tud_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* suffix) {
    std::ofstream out(dir / (dataset.name + suffix));
    if (!out) throw IoError("cannot write " + (dir / (dataset.name + suffix)).string());
    return out;
  };
  auto a = open("_A.txt");
  auto indicator = open("_graph_indicator.txt");
  auto labels = open("_graph_labels.txt");
  const bool with_node_labels =
      !dataset.graphs.empty() && std::all_of(dataset.graphs.begin(), dataset.graphs.end(),
                                             [](const Graph& g) { return g.node_labels().has_value(); });
  std::ofstream node_labels;
  if (with_node_labels) node_labels = open("_node_labels.txt");

  std::size_t offset = 1;
  for (std::size_t gi = 0; gi < dataset.graphs.size(); ++gi) {
    const auto& g = dataset.graphs[gi];
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      indicator << gi + 1 << '\n';
      if (with_node_labels) node_labels << (*g.node_labels())[v] << '\n';
      for (NodeId u : g.neighbors(v)) a << offset + v << ", " << offset + u << '\n';
    }
    const auto lbl = static_cast<std::size_t>(g.label());
    labels << (lbl < dataset.label_values.size() ? dataset.label_values[lbl]
                                                 : static_cast<std::int64_t>(lbl))
           << '\n';
    offset += g.num_nodes();
  }
  for (auto* out : {&a, &indicator, &labels}) {
    if (!*out) throw IoError("write failed under " + dir.string());
  }
}

Dataset degree_features(const Dataset& dataset, std::size_t max_degree_cap) {
  if (max_degree_cap < 1) throw ConfigError("degree cap must be at least 1");
  std::size_t max_degree = 0;
  for (const auto& g : dataset.graphs) max_degree = std::max(max_degree, g.max_degree());
  const std::size_t width = std::min(max_degree, max_degree_cap) + 1;

  Dataset out = dataset;
  for (auto& g : out.graphs) {
    std::vector<std::size_t> hot(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) hot[v] = std::min(g.degree(v), max_degree_cap);
    g = g.with_features(one_hot_rows(hot, width), width);
  }
  out.feature_mode = FeatureMode::kDegreeOneHot;
  return out;
}

Dataset constant_features(const Dataset& dataset) {
  Dataset out = dataset;
  for (auto& g : out.graphs) g = g.with_features(std::vector<double>(g.num_nodes(), 1.0), 1);
  out.feature_mode = FeatureMode::kConstant;
  return out;
}

}  // namespace ugformer
