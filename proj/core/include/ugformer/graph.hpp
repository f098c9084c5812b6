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

#ifndef UGFORMER_GRAPH_HPP_
#define UGFORMER_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ugformer {

using NodeId = std::uint32_t;

// Undirected simple graph with a dense node-feature matrix and a class label.
// Neighbor lists are sorted, deduplicated and symmetric; the graph is
// immutable once built.
class Graph {
 public:
  Graph() = default;

  // Builds from an undirected edge list. Edges are symmetrized, self-loops and
  // duplicates dropped. `features` is row-major [num_nodes x feature_dim].
  static Graph from_edges(std::size_t num_nodes,
                          std::span<const std::pair<NodeId, NodeId>> edges,
                          std::vector<double> features, std::size_t feature_dim,
                          int label,
                          std::optional<std::vector<int>> node_labels = std::nullopt);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const;
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  std::size_t max_degree() const;

  std::size_t feature_dim() const { return feature_dim_; }
  std::span<const double> features() const { return features_; }
  std::span<const double> feature_row(NodeId v) const {
    return std::span<const double>(features_).subspan(v * feature_dim_, feature_dim_);
  }

  int label() const { return label_; }
  const std::optional<std::vector<int>>& node_labels() const { return node_labels_; }

  // Copy with the feature matrix replaced.
  Graph with_features(std::vector<double> features, std::size_t feature_dim) const;
  // Copy with node i renamed to perm[i].
  Graph relabeled(std::span<const NodeId> perm) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<double> features_;
  std::size_t feature_dim_ = 0;
  int label_ = 0;
  std::optional<std::vector<int>> node_labels_;
};

enum class FeatureMode { kNodeLabels, kDegreeOneHot, kConstant };

std::string to_string(FeatureMode mode);
FeatureMode feature_mode_from_string(const std::string& text);

struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  std::size_t num_classes = 0;
  FeatureMode feature_mode = FeatureMode::kConstant;
  // Original graph-label values; class index i corresponds to label_values[i].
  std::vector<std::int64_t> label_values;
  // Original node-label values in one-hot column order (node-label mode).
  std::vector<int> node_label_values;

  std::size_t feature_dim() const { return graphs.empty() ? 0 : graphs.front().feature_dim(); }
  std::size_t total_nodes() const;
  std::vector<std::size_t> class_counts() const;
};

// Reads the benchmark text layout: <name>_A.txt, <name>_graph_indicator.txt,
// <name>_graph_labels.txt and optionally <name>_node_labels.txt. Node labels,
// when present, become one-hot features; otherwise every node gets a single
// constant 1.0 feature. Graph labels are remapped to [0, C) in ascending order
// of their original values.
Dataset load_tud_dataset(const std::filesystem::path& dir, const std::string& name);

// Writes `dataset` in the layout read by load_tud_dataset, using the original
// label values so that a reload reproduces it graph by graph.
void write_tud_dataset(const Dataset& dataset, const std::filesystem::path& dir);

// Replaces node features with one-hot degree indicators of length
// min(max observed degree, cap) + 1, hot at min(degree, cap).
Dataset degree_features(const Dataset& dataset, std::size_t max_degree_cap = 1000);

// Replaces node features with a single all-ones column.
Dataset constant_features(const Dataset& dataset);

}  // namespace ugformer

#endif  // UGFORMER_GRAPH_HPP_
