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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ugformer/graph.hpp"
#include "ugformer/harness.hpp"
#include "ugformer/losses.hpp"
#include "ugformer/model.hpp"
#include "ugformer/ops.hpp"
#include "ugformer/rng.hpp"
#include "ugformer/sampler.hpp"

namespace {

using namespace ugformer;

Tensor random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> data(rows * cols);
  for (auto& x : data) x = dist(rng);
  return Tensor::from_data({rows, cols}, std::move(data));
}

Graph random_graph(std::size_t n, double p, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return Graph::from_edges(n, edges, std::vector<double>(n * dim, 1.0), dim, 0);
}

const Dataset& mutag() {
  static const Dataset ds = load_tud_dataset(std::string(UGFORMER_BENCH_DATA_DIR) + "/MUTAG", "MUTAG");
  return ds;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor a = random_matrix(n, n, 1);
  const Tensor b = random_matrix(n, n, 2);
  NoGradGuard no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b).data().data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_SampleNeighbors(benchmark::State& state) {
  const Graph g = random_graph(200, 0.05, 1, 3);
  std::uint64_t batch = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_neighbors(g, state.range(0), 7, batch++));
}
BENCHMARK(BM_SampleNeighbors)->Arg(4)->Arg(8)->Arg(16);

ModelConfig mutag_config(int variant) {
  ModelConfig cfg;
  cfg.variant = variant;
  cfg.num_layers = 3;
  cfg.num_steps = variant == 1 ? 2 : 1;
  cfg.dim = 32;
  cfg.trans_hidden = 128;
  cfg.sample_size = 8;
  cfg.input_dim = mutag().feature_dim();
  cfg.num_classes = mutag().num_classes;
  return cfg;
}

// Forward pass on one MUTAG-sized graph, followed by backward when range(1) is set.
void BM_ModelStep(benchmark::State& state) {
  UGformer model(mutag_config(static_cast<int>(state.range(0))), 1);
  const Graph& g = mutag().graphs[0];
  const auto contexts = model.contexts_for(g, 1, 0, false);
  const std::vector<std::size_t> label = {static_cast<std::size_t>(g.label())};
  for (auto _ : state) {
    Tensor loss = cross_entropy_loss(model.forward(g, contexts).logits, label);
    if (state.range(1) != 0) {
      model.parameters().zero_grad();
      backward(loss);
    }
    benchmark::DoNotOptimize(loss.item());
  }
}
BENCHMARK(BM_ModelStep)->Args({1, 0})->Args({1, 1})->Args({2, 0})->Args({2, 1});

void BM_MutagEpoch(benchmark::State& state) {
  const Dataset& ds = mutag();
  std::vector<std::size_t> all(ds.graphs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) {
    UGformer model(mutag_config(1), 1);
    benchmark::DoNotOptimize(train_model(model, ds, all, {}, cfg, 3).epoch_loss);
  }
}
BENCHMARK(BM_MutagEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
