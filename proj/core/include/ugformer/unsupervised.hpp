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

#ifndef UGFORMER_UNSUPERVISED_HPP_
#define UGFORMER_UNSUPERVISED_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "ugformer/graph.hpp"
#include "ugformer/model.hpp"
#include "ugformer/parameter.hpp"

namespace ugformer {

struct UnsupervisedConfig {
  double lr = 1e-3;
  std::size_t epochs = 10;
  std::size_t num_negatives = 8;
  std::size_t batch_size = 4;  // graphs per optimizer step
  std::uint64_t seed = 0;

  void validate() const;
};

struct UnsupervisedResult {
  std::vector<double> epoch_loss;  // mean per-node loss, epochs 1..E
  ParameterStore table;            // single parameter "node_embeddings" [M x K*d]
  std::vector<std::size_t> graph_offsets;  // row of node 0 of each graph; size graphs+1

  const Tensor& embeddings() const { return table.parameters().front().tensor; }
};

// Row index of (graph, node) in a table laid out graph after graph.
std::vector<std::size_t> node_offsets(const Dataset& dataset);

// `count` distinct node rows drawn uniformly from [0, total) \ {center}.
std::vector<std::uint32_t> sample_negatives(std::size_t total, std::uint32_t center,
                                            std::size_t count, std::uint64_t seed);

// Jointly trains the encoder of `model` and a per-node output table o so that
// each node's embedding e_v scores its own row o_v above a sampled set of
// other nodes' rows. The classifier head is left untouched.
UnsupervisedResult train_unsupervised(
    UGformer& model, const Dataset& dataset, const UnsupervisedConfig& cfg,
    const std::function<void(std::size_t epoch, double loss)>& on_epoch = {});

// CSV with header graph_id,node_id,node_label,o_0..o_{D-1}.
void export_node_table(const Dataset& dataset, const UnsupervisedResult& result,
                       const std::filesystem::path& out_path);

}  // namespace ugformer

#endif  // UGFORMER_UNSUPERVISED_HPP_
