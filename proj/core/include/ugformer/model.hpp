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

#ifndef UGFORMER_MODEL_HPP_
#define UGFORMER_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ugformer/graph.hpp"
#include "ugformer/keyvalue.hpp"
#include "ugformer/ops.hpp"
#include "ugformer/parameter.hpp"
#include "ugformer/sampler.hpp"
#include "ugformer/tensor.hpp"

namespace ugformer {

// How variant 1 updates node states inside sampled contexts.
enum class ContextMode {
  // Every step reads the shared node states, and each node's new state comes
  // from its own context; neighbors are read-only.
  kCenterWrite,
  // Each context evolves a private copy of all its members for T steps and
  // only the center's final row is kept.
  kStrict,
};

std::string to_string(ContextMode mode);
ContextMode context_mode_from_string(const std::string& text);

struct ModelConfig {
  int variant = 1;                  // 1: sampled neighbors, 2: fully connected
  std::size_t num_layers = 1;       // K
  std::size_t num_steps = 1;        // T, variant 1 only
  std::size_t dim = 32;             // d
  std::size_t trans_hidden = 128;   // hidden width of the transition MLP
  std::size_t sample_size = 8;      // N, variant 1 only
  std::size_t num_classes = 2;      // C
  std::size_t input_dim = 1;        // d0
  std::size_t full_attention_cap = 5000;
  ContextMode context_mode = ContextMode::kCenterWrite;
  double layer_norm_eps = 1e-5;

  // Throws ConfigError on any violated invariant.
  void validate() const;
  std::size_t embedding_dim() const { return num_layers * dim; }

  void write_to(KeyValueDoc& doc) const;
  // Keys absent from `doc` keep their defaults.
  static ModelConfig read_from(const KeyValueDoc& doc);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Parameters of one layer, shared by all T steps of that layer.
struct LayerWeights {
  Tensor query;             // [d x d]
  Tensor key;               // [d x d]
  Tensor value;             // [d x d]
  Tensor trans_w1;          // [d x hidden]
  Tensor trans_b1;          // [hidden]
  Tensor trans_w2;          // [hidden x d]
  Tensor trans_b2;          // [d]
  Tensor attn_norm_gamma;   // [d]
  Tensor attn_norm_beta;    // [d]
  Tensor trans_norm_gamma;  // [d]
  Tensor trans_norm_beta;   // [d]
  Tensor gcn_weight;        // [d x d], variant 2 only
};

struct ForwardOptions {
  const AttentionObserver* observer = nullptr;
};

struct ForwardResult {
  Tensor input;                                  // projected features, [n x d]
  std::vector<Tensor> layer_inputs;              // state entering layer k
  std::vector<Tensor> layer_states;              // state leaving layer k
  std::vector<std::vector<Tensor>> step_states;  // [k][t], centre-write variant 1
  std::vector<std::vector<Tensor>> attention_outputs;  // [k][t] attention sums
  Tensor node_embeddings;                        // [n x K*d]
  Tensor graph_embedding;                        // [K*d]
  Tensor logits;                                 // [C]
};

// Per-step building blocks, usable on their own.

// x = LNorm(h + ATT(h)) where row v of ATT attends over contexts[v].
// Requires contexts[v].center == v for every node. When `attention` is
// non-null it receives the pre-residual attention output.
Tensor attention_step(const Tensor& h, std::span<const NeighborSample> contexts,
                      const LayerWeights& lw, double eps = 1e-5,
                      const AttentionObserver* observer = nullptr, Tensor* attention = nullptr);

// h = LNorm(x + W2 relu(W1 x + b1) + b2), applied row-wise.
Tensor transition_step(const Tensor& x, const LayerWeights& lw, double eps = 1e-5);

// softmax(Q h (K h)^T / sqrt(d)) V h over all rows of h.
Tensor dense_self_attention(const Tensor& h, const LayerWeights& lw,
                            const AttentionObserver* observer = nullptr);

// One transformer block in which every node attends to every node. Throws
// CapacityError when h has more than `node_cap` rows.
Tensor full_graph_attention(const Tensor& h, const LayerWeights& lw, double eps = 1e-5,
                            std::size_t node_cap = 5000,
                            const AttentionObserver* observer = nullptr,
                            Tensor* attention = nullptr);

// Symmetric-normalized adjacency with self-loops:
//   a[v][u] = 1 / sqrt((deg v + 1)(deg u + 1)) for u in N(v) + {v}.
SparseMatrix gcn_normalized_adjacency(const Graph& g);

// relu(A_hat . hp . W)
Tensor gcn_aggregate(const Tensor& hp, const Graph& g, const LayerWeights& lw);
Tensor gcn_aggregate(const Tensor& hp, const SparseMatrix& a_hat, const LayerWeights& lw);

// [h^(1) ; ... ; h^(K)] per node.
Tensor readout_concat(std::span<const Tensor> per_layer);
// Column sums over nodes.
Tensor graph_pool_sum(const Tensor& node_embeddings);
// W e + b with W [C x D].
Tensor classifier_logits(const Tensor& graph_embedding, const Tensor& weight, const Tensor& bias);
// softmax(W e + b).
Tensor classify(const Tensor& graph_embedding, const Tensor& weight, const Tensor& bias);

class UGformer {
 public:
  UGformer(ModelConfig config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParameterStore& parameters() { return params_; }
  const ParameterStore& parameters() const { return params_; }
  // Every parameter except the classifier head.
  std::span<Parameter> encoder_parameters();

  const Tensor& input_projection() const { return input_projection_; }
  const LayerWeights& layer(std::size_t k) const { return layers_.at(k); }
  const Tensor& classifier_weight() const { return classifier_weight_; }
  const Tensor& classifier_bias() const { return classifier_bias_; }

  // Full pass for one graph. Variant 1 requires one context per node (see
  // sample_neighbors); variant 2 ignores `contexts`.
  ForwardResult forward(const Graph& g, std::span<const NeighborSample> contexts,
                        const ForwardOptions& options = {}) const;

  // Contexts for `g` drawn with this model's sample size (variant 1), or an
  // empty list (variant 2).
  std::vector<NeighborSample> contexts_for(const Graph& g, std::uint64_t seed,
                                           std::uint64_t batch_id, bool full_neighborhood) const;

 private:
  ModelConfig config_;
  ParameterStore params_;
  Tensor input_projection_;
  std::vector<LayerWeights> layers_;
  Tensor classifier_weight_;
  Tensor classifier_bias_;
};

ForwardResult variant1_forward(const UGformer& model, const Graph& g,
                               std::span<const NeighborSample> contexts,
                               const ForwardOptions& options = {});
ForwardResult variant2_forward(const UGformer& model, const Graph& g,
                               const ForwardOptions& options = {});

}  // namespace ugformer

#endif  // UGFORMER_MODEL_HPP_
