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

#ifndef UGFORMER_HARNESS_HPP_
#define UGFORMER_HARNESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ugformer/folds.hpp"
#include "ugformer/graph.hpp"
#include "ugformer/keyvalue.hpp"
#include "ugformer/model.hpp"

namespace ugformer {

// Hyperparameter grids swept for the benchmark runs.
inline constexpr std::array<std::size_t, 3> kLayerGrid = {1, 2, 3};
inline constexpr std::array<std::size_t, 4> kStepGrid = {1, 2, 3, 4};
inline constexpr std::array<std::size_t, 3> kNeighborGrid = {4, 8, 16};
inline constexpr std::array<std::size_t, 4> kHiddenGrid = {128, 256, 512, 1024};
inline constexpr std::array<double, 4> kLearningRateGrid = {5e-5, 1e-4, 5e-4, 1e-3};

enum class EvalSampling { kFixedSeed, kFullNeighborhood };
enum class ModelSelection { kBestEpoch, kLastEpoch };

std::string to_string(EvalSampling mode);
std::string to_string(ModelSelection mode);
EvalSampling eval_sampling_from_string(const std::string& text);
ModelSelection model_selection_from_string(const std::string& text);

struct TrainConfig {
  double lr = 5e-4;
  std::size_t epochs = 50;
  std::size_t batch_size = 4;
  std::uint64_t seed = 0;
  EvalSampling eval_sampling = EvalSampling::kFixedSeed;
  ModelSelection selection = ModelSelection::kBestEpoch;
  std::size_t jobs = 1;  // concurrent fold workers in run_cv

  void validate() const;
  void write_to(KeyValueDoc& doc) const;
  static TrainConfig read_from(const KeyValueDoc& doc);
};

struct TrainHooks {
  const AttentionObserver* observer = nullptr;
  std::function<void(std::size_t epoch, double train_loss, double eval_accuracy)> on_epoch;
};

struct TrainResult {
  std::vector<double> epoch_loss;      // mean training loss, epochs 1..E
  std::vector<double> epoch_accuracy;  // eval accuracy after epochs 0..E (0 = untrained)
  std::size_t selected_epoch = 0;
  double accuracy = 0.0;               // eval accuracy at selected_epoch
  std::vector<std::vector<double>> weights;  // parameter values at selected_epoch
};

// Trains `model` on `train_indices`, evaluating on `eval_indices` before the
// first epoch and after each one. Batches of batch_size graphs are forwarded
// independently; their logits are stacked so one mean cross-entropy drives one
// Adam step. The model is left holding the selected epoch's weights.
TrainResult train_model(UGformer& model, const Dataset& dataset,
                        std::span<const std::size_t> train_indices,
                        std::span<const std::size_t> eval_indices, const TrainConfig& cfg,
                        std::uint64_t stream_seed, const TrainHooks& hooks = {});

// Argmax class of every listed graph; ties resolve to the lower class index.
std::vector<std::size_t> predict(const UGformer& model, const Dataset& dataset,
                                 std::span<const std::size_t> indices, EvalSampling sampling,
                                 std::uint64_t eval_seed, const TrainHooks& hooks = {});

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels);

double evaluate_accuracy(const UGformer& model, const Dataset& dataset,
                         std::span<const std::size_t> indices, EvalSampling sampling,
                         std::uint64_t eval_seed, const TrainHooks& hooks = {});

// Seed used for evaluation-time neighbor sampling; fixed per run.
std::uint64_t eval_seed_for(const TrainConfig& cfg);
// Per-fold seed: run seed XOR fold id.
std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t test_size = 0;
  TrainResult train;
};

FoldResult train_fold(const Dataset& dataset, const FoldPlan& plan, std::size_t fold,
                      const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                      const TrainHooks& hooks = {});

struct Metrics {
  std::vector<double> per_fold_accuracy;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::vector<double> per_epoch_loss;  // training loss averaged over folds

  static Metrics from_folds(std::span<const FoldResult> folds);
  static Metrics from_accuracies(std::vector<double> accuracies);
};

struct CvResult {
  FoldPlan plan;
  std::vector<FoldResult> folds;
  Metrics metrics;
};

// All ten folds, run by up to train_cfg.jobs concurrent workers. Results do
// not depend on the number of workers.
CvResult run_cv(const Dataset& dataset, const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                const TrainHooks& hooks = {});

// "name  mean ± std" with percentages to two decimals.
std::string format_table_row(const std::string& name, const Metrics& metrics);
std::string format_metrics_table(const std::string& name, std::span<const FoldResult> folds,
                                 const Metrics& metrics);

// One line per record: `fold=<k> accuracy=<a> selected_epoch=<e> test_size=<n>`,
// then `epoch=<e> loss=<l>` for the averaged loss series, then
// `aggregate mean=<m> std=<s> folds=<n>`.
std::string format_metrics_records(std::span<const FoldResult> folds, const Metrics& metrics);

struct MetricsRecord {
  std::string kind;  // "fold", "epoch" or "aggregate"
  KeyValueDoc fields;
};
std::vector<MetricsRecord> parse_metrics_records(const std::string& text);

// Writes one CSV row per node: graph_id,node_id,node_label,e_0..e_{D-1}
// where e is the concatenated per-layer node embedding. node_label is empty
// when the dataset has none.
void export_embeddings(const Dataset& dataset, const UGformer& model, EvalSampling sampling,
                       std::uint64_t eval_seed, const std::filesystem::path& out_path);

}  // namespace ugformer

#endif  // UGFORMER_HARNESS_HPP_
