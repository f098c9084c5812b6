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

#include "ugformer/unsupervised.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "ugformer/adam.hpp"
#include "ugformer/error.hpp"
#include "ugformer/keyvalue.hpp"
#include "ugformer/losses.hpp"
#include "ugformer/ops.hpp"
#include "ugformer/rng.hpp"

namespace ugformer {
namespace {

constexpr std::uint64_t kTableTag = 0x7461626c;
constexpr std::uint64_t kOrderTag = 0x6f726472;
constexpr std::uint64_t kContextTag = 0x63747874;
constexpr std::uint64_t kNegativeTag = 0x6e656773;

}  // namespace

void UnsupervisedConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
  if (num_negatives < 1) throw ConfigError("at least one negative sample is required");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
}

std::vector<std::size_t> node_offsets(const Dataset& dataset) {
  std::vector<std::size_t> offsets{0};
  for (const auto& g : dataset.graphs) offsets.push_back(offsets.back() + g.num_nodes());
  return offsets;
}

std::vector<std::uint32_t> sample_negatives(std::size_t total, std::uint32_t center,
                                            std::size_t count, std::uint64_t seed) {
  if (center >= total) throw ContractError("negative sampling: center outside the node range");
  if (count + 1 > total) {
    throw ConfigError("cannot draw " + std::to_string(count) + " negatives from " +
                      std::to_string(total) + " nodes");
  }
  Rng rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 2);
  std::vector<std::uint32_t> out;
  out.reserve(count);
  while (out.size() < count) {
    auto u = static_cast<std::uint32_t>(pick(rng));
    if (u >= center) ++u;
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
  }
  return out;
}

UnsupervisedResult train_unsupervised(UGformer& model, const Dataset& dataset,
                                      const UnsupervisedConfig& cfg,
                                      const std::function<void(std::size_t, double)>& on_epoch) {
  cfg.validate();
  if (dataset.graphs.empty()) throw ConfigError("empty dataset");
  UnsupervisedResult result;
  result.graph_offsets = node_offsets(dataset);
  const std::size_t total = result.graph_offsets.back();
  if (total > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("too many nodes");
  Rng init_rng(derive_seed({cfg.seed, kTableTag}));
  Tensor table = result.table.add("node_embeddings", {total, model.config().embedding_dim()},
                                  Init::kXavierUniform, init_rng);

  std::vector<Parameter> trained(model.encoder_parameters().begin(),
                                 model.encoder_parameters().end());
  trained.push_back(result.table.parameters().front());
  AdamState adam;
  adam.lr = cfg.lr;

  std::vector<std::size_t> order(dataset.graphs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng order_rng(derive_seed({cfg.seed, kOrderTag}));
  std::uint64_t batch_counter = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    double loss_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<Tensor> node_losses;
      for (std::size_t i = start; i < end; ++i) {
        const auto gi = order[i];
        const Graph& g = dataset.graphs[gi];
        const auto contexts =
            model.contexts_for(g, derive_seed({cfg.seed, kContextTag, gi}), batch_counter, false);
        const Tensor e = model.forward(g, contexts).node_embeddings;
        for (std::size_t v = 0; v < g.num_nodes(); ++v) {
          const auto row = static_cast<std::uint32_t>(result.graph_offsets[gi] + v);
          const auto negatives = sample_negatives(
              total, row, cfg.num_negatives, derive_seed({cfg.seed, kNegativeTag, epoch, row}));
          const std::uint32_t idx[] = {static_cast<std::uint32_t>(v)};
          node_losses.push_back(reshape(
              sampled_softmax_loss(reshape(gather_rows(e, idx), {e.cols()}), row, table, negatives),
              {1}));
        }
      }
      ++batch_counter;
      if (node_losses.empty()) continue;
      Tensor loss = scale(sum(concat_rows(node_losses)), 1.0 / static_cast<double>(node_losses.size()));
      const double value = loss.item();
      if (!std::isfinite(value)) throw TrainingError(epoch, "non-finite unsupervised loss");
      for (auto& p : trained) p.tensor.zero_grad();
      backward(loss);
      adam_step(trained, adam);
      loss_total += value * static_cast<double>(node_losses.size());
    }
    const double epoch_loss = loss_total / static_cast<double>(total);
    result.epoch_loss.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  return result;
}

void export_node_table(const Dataset& dataset, const UnsupervisedResult& result,
                       const std::filesystem::path& out_path) {
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
  const Tensor& table = result.embeddings();
  const std::size_t width = table.cols();
  const auto values = table.data();
  out << "graph_id,node_id,node_label";
  for (std::size_t j = 0; j < width; ++j) out << ",o_" << j;
  out << '\n';
  for (std::size_t gi = 0; gi < dataset.graphs.size(); ++gi) {
    const Graph& g = dataset.graphs[gi];
    const auto& labels = g.node_labels();
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      const std::size_t row = result.graph_offsets[gi] + v;
      out << gi << ',' << v << ',';
      if (labels) out << (*labels)[v];
      for (std::size_t j = 0; j < width; ++j) out << ',' << format_double(values[row * width + j]);
      out << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + out_path.string());
}

}  // namespace ugformer
