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

#include "ugformer/model.hpp"

#include <cmath>

#include "ugformer/error.hpp"

namespace ugformer {
namespace {

std::vector<std::vector<std::uint32_t>> member_lists(std::span<const NeighborSample> contexts,
                                                     std::size_t num_nodes) {
  if (contexts.size() != num_nodes) {
    throw ContractError("expected one context per node (" + std::to_string(num_nodes) + "), got " +
                        std::to_string(contexts.size()));
  }
  std::vector<std::vector<std::uint32_t>> lists;
  lists.reserve(contexts.size());
  for (std::size_t v = 0; v < contexts.size(); ++v) {
    const auto& c = contexts[v];
    if (c.center != v || c.context.empty() || c.context.front() != c.center) {
      throw ContractError("context " + std::to_string(v) + " is not centred on node " +
                          std::to_string(v));
    }
    for (auto u : c.context) {
      if (u >= num_nodes) {
        throw ContractError("context of node " + std::to_string(v) + " references node " +
                            std::to_string(u) + " of " + std::to_string(num_nodes));
      }
    }
    lists.emplace_back(c.context.begin(), c.context.end());
  }
  return lists;
}

Tensor feature_tensor(const Graph& g, std::size_t expected_dim) {
  if (g.feature_dim() != expected_dim) {
    throw DimensionError("graph features have width " + std::to_string(g.feature_dim()) +
                         ", model expects " + std::to_string(expected_dim));
  }
  if (g.num_nodes() == 0) throw ContractError("graph has no nodes");
  return Tensor::from_data({g.num_nodes(), g.feature_dim()},
                           std::vector<double>(g.features().begin(), g.features().end()));
}

void finish(const UGformer& model, ForwardResult& r) {
  r.node_embeddings = readout_concat(r.layer_states);
  r.graph_embedding = graph_pool_sum(r.node_embeddings);
  r.logits = classifier_logits(r.graph_embedding, model.classifier_weight(), model.classifier_bias());
}

}  // namespace

std::string to_string(ContextMode mode) {
  return mode == ContextMode::kStrict ? "strict" : "center-write";
}

ContextMode context_mode_from_string(const std::string& text) {
  if (text == "center-write") return ContextMode::kCenterWrite;
  if (text == "strict") return ContextMode::kStrict;
  throw ConfigError("unknown context mode '" + text + "'");
}

void ModelConfig::validate() const {
  if (variant != 1 && variant != 2) throw ConfigError("variant must be 1 or 2");
  if (num_layers < 1) throw ConfigError("number of layers K must be at least 1");
  if (num_steps < 1) throw ConfigError("number of steps T must be at least 1");
  if (dim < 1) throw ConfigError("dim must be at least 1");
  if (trans_hidden < 1) throw ConfigError("transition hidden size must be at least 1");
  if (sample_size < 1) throw ConfigError("neighbor sample size N must be at least 1");
  if (num_classes < 2) throw ConfigError("need at least 2 classes");
  if (input_dim < 1) throw ConfigError("input dimension must be at least 1");
  if (!(layer_norm_eps > 0.0)) throw ConfigError("layer-norm eps must be positive");
}

void ModelConfig::write_to(KeyValueDoc& doc) const {
  doc.set("variant", variant);
  doc.set("layers", std::uint64_t{num_layers});
  doc.set("steps", std::uint64_t{num_steps});
  doc.set("dim", std::uint64_t{dim});
  doc.set("hidden", std::uint64_t{trans_hidden});
  doc.set("neighbors", std::uint64_t{sample_size});
  doc.set("num_classes", std::uint64_t{num_classes});
  doc.set("input_dim", std::uint64_t{input_dim});
  doc.set("attention_cap", std::uint64_t{full_attention_cap});
  doc.set("context_mode", to_string(context_mode));
  doc.set("layer_norm_eps", layer_norm_eps);
}

ModelConfig ModelConfig::read_from(const KeyValueDoc& doc) {
  ModelConfig c;
  if (doc.contains("variant")) c.variant = static_cast<int>(doc.get_int("variant"));
  if (doc.contains("layers")) c.num_layers = doc.get_uint("layers");
  if (doc.contains("steps")) c.num_steps = doc.get_uint("steps");
  if (doc.contains("dim")) c.dim = doc.get_uint("dim");
  if (doc.contains("hidden")) c.trans_hidden = doc.get_uint("hidden");
  if (doc.contains("neighbors")) c.sample_size = doc.get_uint("neighbors");
  if (doc.contains("num_classes")) c.num_classes = doc.get_uint("num_classes");
  if (doc.contains("input_dim")) c.input_dim = doc.get_uint("input_dim");
  if (doc.contains("attention_cap")) c.full_attention_cap = doc.get_uint("attention_cap");
  if (doc.contains("context_mode")) c.context_mode = context_mode_from_string(doc.get_string("context_mode"));
  if (doc.contains("layer_norm_eps")) c.layer_norm_eps = doc.get_double("layer_norm_eps");
  return c;
}

Tensor attention_step(const Tensor& h, std::span<const NeighborSample> contexts,
                      const LayerWeights& lw, double eps, const AttentionObserver* observer,
                      Tensor* attention) {
  const std::size_t n = h.rows();
  const auto lists = member_lists(contexts, n);
  std::vector<std::uint32_t> centers(n);
  for (std::size_t v = 0; v < n; ++v) centers[v] = static_cast<std::uint32_t>(v);

  const double score_scale = 1.0 / std::sqrt(static_cast<double>(h.cols()));
  Tensor q = matmul(h, lw.query);
  Tensor k = matmul(h, lw.key);
  Tensor v = matmul(h, lw.value);
  Tensor att = grouped_attention(q, k, v, centers, lists, score_scale, observer);
  if (attention) *attention = att;
  return layer_norm(add(h, att), lw.attn_norm_gamma, lw.attn_norm_beta, eps);
}

Tensor transition_step(const Tensor& x, const LayerWeights& lw, double eps) {
  Tensor hidden = relu(add_row(matmul(x, lw.trans_w1), lw.trans_b1));
  Tensor out = add_row(matmul(hidden, lw.trans_w2), lw.trans_b2);
  return layer_norm(add(x, out), lw.trans_norm_gamma, lw.trans_norm_beta, eps);
}

Tensor dense_self_attention(const Tensor& h, const LayerWeights& lw,
                            const AttentionObserver* observer) {
  Tensor q = matmul(h, lw.query);
  Tensor k = matmul(h, lw.key);
  Tensor v = matmul(h, lw.value);
  const double score_scale = 1.0 / std::sqrt(static_cast<double>(h.cols()));
  Tensor weights = softmax_rows(scale(matmul(q, transpose(k)), score_scale));
  if (observer && *observer) {
    const std::size_t n = weights.cols();
    for (std::size_t i = 0; i < weights.rows(); ++i) (*observer)(weights.data().subspan(i * n, n));
  }
  return matmul(weights, v);
}

Tensor full_graph_attention(const Tensor& h, const LayerWeights& lw, double eps,
                            std::size_t node_cap, const AttentionObserver* observer,
                            Tensor* attention) {
  if (h.rows() > node_cap) {
    throw CapacityError("full-graph attention on " + std::to_string(h.rows()) +
                        " nodes exceeds the cap of " + std::to_string(node_cap) +
                        "; use variant 1 (sampled neighbors) for large graphs");
  }
  Tensor att = dense_self_attention(h, lw, observer);
  if (attention) *attention = att;
  Tensor x = layer_norm(add(h, att), lw.attn_norm_gamma, lw.attn_norm_beta, eps);
  return transition_step(x, lw, eps);
}

SparseMatrix gcn_normalized_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  SparseMatrix a;
  a.rows = n;
  a.cols = n;
  a.row_ptr.assign(1, 0);
  for (NodeId v = 0; v < n; ++v) {
    const double dv = static_cast<double>(g.degree(v) + 1);
    // Self-loop merged into the sorted neighbor order.
    bool self_done = false;
    const auto push = [&](NodeId u) {
      const double du = static_cast<double>(g.degree(u) + 1);
      a.col_idx.push_back(u);
      a.values.push_back(1.0 / std::sqrt(dv * du));
    };
    for (NodeId u : g.neighbors(v)) {
      if (!self_done && u > v) {
        push(v);
        self_done = true;
      }
      push(u);
    }
    if (!self_done) push(v);
    a.row_ptr.push_back(a.col_idx.size());
  }
  return a;
}

Tensor gcn_aggregate(const Tensor& hp, const SparseMatrix& a_hat, const LayerWeights& lw) {
  return relu(spmm(a_hat, matmul(hp, lw.gcn_weight)));
}

Tensor gcn_aggregate(const Tensor& hp, const Graph& g, const LayerWeights& lw) {
  return gcn_aggregate(hp, gcn_normalized_adjacency(g), lw);
}

Tensor readout_concat(std::span<const Tensor> per_layer) {
  if (per_layer.empty()) throw ContractError("readout_concat: no layers");
  const std::size_t n = per_layer.front().rows();
  for (const auto& t : per_layer) {
    if (t.rank() != 2 || t.rows() != n) {
      throw ContractError("readout_concat: layer states have different node counts");
    }
  }
  if (per_layer.size() == 1) return per_layer.front();
  return concat_last(per_layer);
}

Tensor graph_pool_sum(const Tensor& node_embeddings) {
  if (node_embeddings.rows() == 0) throw ContractError("graph_pool_sum: empty graph");
  return sum_rows(node_embeddings);
}

Tensor classifier_logits(const Tensor& graph_embedding, const Tensor& weight, const Tensor& bias) {
  const std::size_t d = graph_embedding.numel();
  const std::size_t c = bias.numel();
  Tensor column = reshape(graph_embedding, {d, 1});
  return add(reshape(matmul(weight, column), {c}), bias);
}

Tensor classify(const Tensor& graph_embedding, const Tensor& weight, const Tensor& bias) {
  return reshape(softmax_rows(classifier_logits(graph_embedding, weight, bias)), {bias.numel()});
}

UGformer::UGformer(ModelConfig config, std::uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(seed);
  const std::size_t d = config_.dim;
  input_projection_ = params_.add("input.projection", {config_.input_dim, d}, Init::kXavierUniform, rng);
  for (std::size_t k = 0; k < config_.num_layers; ++k) {
    const std::string p = "layer" + std::to_string(k) + ".";
    LayerWeights lw;
    lw.query = params_.add(p + "query", {d, d}, Init::kXavierUniform, rng);
    lw.key = params_.add(p + "key", {d, d}, Init::kXavierUniform, rng);
    lw.value = params_.add(p + "value", {d, d}, Init::kXavierUniform, rng);
    lw.trans_w1 = params_.add(p + "trans.w1", {d, config_.trans_hidden}, Init::kXavierUniform, rng);
    lw.trans_b1 = params_.add(p + "trans.b1", {config_.trans_hidden}, Init::kZeros, rng);
    lw.trans_w2 = params_.add(p + "trans.w2", {config_.trans_hidden, d}, Init::kXavierUniform, rng);
    lw.trans_b2 = params_.add(p + "trans.b2", {d}, Init::kZeros, rng);
    lw.attn_norm_gamma = params_.add(p + "attn_norm.gamma", {d}, Init::kOnes, rng);
    lw.attn_norm_beta = params_.add(p + "attn_norm.beta", {d}, Init::kZeros, rng);
    lw.trans_norm_gamma = params_.add(p + "trans_norm.gamma", {d}, Init::kOnes, rng);
    lw.trans_norm_beta = params_.add(p + "trans_norm.beta", {d}, Init::kZeros, rng);
    if (config_.variant == 2) {
      lw.gcn_weight = params_.add(p + "gcn.weight", {d, d}, Init::kXavierUniform, rng);
    }
    layers_.push_back(std::move(lw));
  }
  classifier_weight_ = params_.add("classifier.weight", {config_.num_classes, config_.embedding_dim()},
                                   Init::kXavierUniform, rng);
  classifier_bias_ = params_.add("classifier.bias", {config_.num_classes}, Init::kZeros, rng);
}

std::span<Parameter> UGformer::encoder_parameters() {
  auto& all = params_.parameters();
  return std::span<Parameter>(all.data(), all.size() - 2);
}

ForwardResult UGformer::forward(const Graph& g, std::span<const NeighborSample> contexts,
                                const ForwardOptions& options) const {
  return config_.variant == 1 ? variant1_forward(*this, g, contexts, options)
                              : variant2_forward(*this, g, options);
}

std::vector<NeighborSample> UGformer::contexts_for(const Graph& g, std::uint64_t seed,
                                                   std::uint64_t batch_id,
                                                   bool full_neighborhood) const {
  if (config_.variant != 1) return {};
  return sample_neighbors(g, full_neighborhood ? kFullNeighborhood : config_.sample_size, seed, batch_id);
}

ForwardResult variant1_forward(const UGformer& model, const Graph& g,
                               std::span<const NeighborSample> contexts,
                               const ForwardOptions& options) {
  const auto& cfg = model.config();
  if (cfg.variant != 1) throw ConfigError("variant1_forward called on a variant-2 model");
  ForwardResult r;
  r.input = matmul(feature_tensor(g, cfg.input_dim), model.input_projection());
  Tensor h = r.input;
  const double eps = cfg.layer_norm_eps;

  if (cfg.context_mode == ContextMode::kCenterWrite) {
    for (std::size_t k = 0; k < cfg.num_layers; ++k) {
      const auto& lw = model.layer(k);
      r.layer_inputs.push_back(h);
      auto& steps = r.step_states.emplace_back();
      auto& atts = r.attention_outputs.emplace_back();
      for (std::size_t t = 0; t < cfg.num_steps; ++t) {
        Tensor att;
        Tensor x = attention_step(h, contexts, lw, eps, options.observer, &att);
        h = transition_step(x, lw, eps);
        atts.push_back(att);
        steps.push_back(h);
      }
      r.layer_states.push_back(h);
    }
  } else {
    const auto lists = member_lists(contexts, g.num_nodes());
    const std::uint32_t center_row = 0;
    for (std::size_t k = 0; k < cfg.num_layers; ++k) {
      const auto& lw = model.layer(k);
      r.layer_inputs.push_back(h);
      std::vector<Tensor> centers;
      centers.reserve(lists.size());
      for (const auto& members : lists) {
        Tensor local = gather_rows(h, members);
        for (std::size_t t = 0; t < cfg.num_steps; ++t) {
          Tensor att = dense_self_attention(local, lw, options.observer);
          Tensor x = layer_norm(add(local, att), lw.attn_norm_gamma, lw.attn_norm_beta, eps);
          local = transition_step(x, lw, eps);
        }
        centers.push_back(gather_rows(local, {&center_row, 1}));
      }
      h = concat_rows(centers);
      r.layer_states.push_back(h);
    }
  }
  finish(model, r);
  return r;
}

ForwardResult variant2_forward(const UGformer& model, const Graph& g, const ForwardOptions& options) {
  const auto& cfg = model.config();
  if (cfg.variant != 2) throw ConfigError("variant2_forward called on a variant-1 model");
  ForwardResult r;
  r.input = matmul(feature_tensor(g, cfg.input_dim), model.input_projection());
  const SparseMatrix a_hat = gcn_normalized_adjacency(g);
  Tensor h = r.input;
  for (std::size_t k = 0; k < cfg.num_layers; ++k) {
    const auto& lw = model.layer(k);
    r.layer_inputs.push_back(h);
    Tensor att;
    Tensor hp = full_graph_attention(h, lw, cfg.layer_norm_eps, cfg.full_attention_cap,
                                     options.observer, &att);
    r.attention_outputs.push_back({att});
    h = gcn_aggregate(hp, a_hat, lw);
    r.layer_states.push_back(h);
  }
  finish(model, r);
  return r;
}

}  // namespace ugformer
