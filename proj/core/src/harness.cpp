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

#include "ugformer/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ugformer/adam.hpp"
#include "ugformer/error.hpp"
#include "ugformer/losses.hpp"
#include "ugformer/rng.hpp"

namespace ugformer {
namespace {

// Stream tags keep the derived seeds of different consumers apart.
constexpr std::uint64_t kInitTag = 0x696e6974;
constexpr std::uint64_t kShuffleTag = 0x73687566;
constexpr std::uint64_t kSampleTag = 0x73616d70;
constexpr std::uint64_t kEvalTag = 0x6576616c;

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

std::string to_string(EvalSampling mode) {
  return mode == EvalSampling::kFullNeighborhood ? "full-neighborhood" : "fixed-seed";
}

std::string to_string(ModelSelection mode) {
  return mode == ModelSelection::kLastEpoch ? "last-epoch" : "best-epoch";
}

EvalSampling eval_sampling_from_string(const std::string& text) {
  if (text == "fixed-seed") return EvalSampling::kFixedSeed;
  if (text == "full-neighborhood") return EvalSampling::kFullNeighborhood;
  throw ConfigError("unknown eval sampling mode '" + text + "'");
}

ModelSelection model_selection_from_string(const std::string& text) {
  if (text == "best-epoch") return ModelSelection::kBestEpoch;
  if (text == "last-epoch") return ModelSelection::kLastEpoch;
  throw ConfigError("unknown model selection '" + text + "'");
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

void TrainConfig::write_to(KeyValueDoc& doc) const {
  doc.set("lr", lr);
  doc.set("epochs", std::uint64_t{epochs});
  doc.set("batch_size", std::uint64_t{batch_size});
  doc.set("seed", seed);
  doc.set("eval_sampling", to_string(eval_sampling));
  doc.set("selection", to_string(selection));
  doc.set("jobs", std::uint64_t{jobs});
}

TrainConfig TrainConfig::read_from(const KeyValueDoc& doc) {
  TrainConfig c;
  if (doc.contains("lr")) c.lr = doc.get_double("lr");
  if (doc.contains("epochs")) c.epochs = doc.get_uint("epochs");
  if (doc.contains("batch_size")) c.batch_size = doc.get_uint("batch_size");
  if (doc.contains("seed")) c.seed = doc.get_uint("seed");
  if (doc.contains("eval_sampling")) c.eval_sampling = eval_sampling_from_string(doc.get_string("eval_sampling"));
  if (doc.contains("selection")) c.selection = model_selection_from_string(doc.get_string("selection"));
  if (doc.contains("jobs")) c.jobs = doc.get_uint("jobs");
  return c;
}

std::uint64_t eval_seed_for(const TrainConfig& cfg) { return derive_seed({cfg.seed, kEvalTag}); }

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) { return seed ^ fold; }

std::vector<std::size_t> predict(const UGformer& model, const Dataset& dataset,
                                 std::span<const std::size_t> indices, EvalSampling sampling,
                                 std::uint64_t eval_seed, const TrainHooks& hooks) {
  NoGradGuard no_grad;
  ForwardOptions options{hooks.observer};
  std::vector<std::size_t> out;
  out.reserve(indices.size());
  for (auto gi : indices) {
    const Graph& g = dataset.graphs.at(gi);
    const auto contexts = model.contexts_for(g, derive_seed({eval_seed, gi}), 0,
                                             sampling == EvalSampling::kFullNeighborhood);
    const auto r = model.forward(g, contexts, options);
    out.push_back(argmax(r.logits.data()));
  }
  return out;
}

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels) {
  if (predictions.size() != labels.size()) throw ContractError("accuracy: length mismatch");
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double evaluate_accuracy(const UGformer& model, const Dataset& dataset,
                         std::span<const std::size_t> indices, EvalSampling sampling,
                         std::uint64_t eval_seed, const TrainHooks& hooks) {
  const auto predictions = predict(model, dataset, indices, sampling, eval_seed, hooks);
  std::vector<std::size_t> labels;
  labels.reserve(indices.size());
  for (auto gi : indices) labels.push_back(static_cast<std::size_t>(dataset.graphs[gi].label()));
  return accuracy(predictions, labels);
}

TrainResult train_model(UGformer& model, const Dataset& dataset,
                        std::span<const std::size_t> train_indices,
                        std::span<const std::size_t> eval_indices, const TrainConfig& cfg,
                        std::uint64_t stream_seed, const TrainHooks& hooks) {
  cfg.validate();
  if (train_indices.empty() && cfg.epochs > 0) throw ConfigError("empty training set");
  auto& params = model.parameters();
  AdamState adam;
  adam.lr = cfg.lr;
  const std::uint64_t eval_seed = eval_seed_for(cfg);
  ForwardOptions options{hooks.observer};

  TrainResult result;
  result.epoch_accuracy.push_back(
      evaluate_accuracy(model, dataset, eval_indices, cfg.eval_sampling, eval_seed, hooks));
  result.weights = params.snapshot();
  result.accuracy = result.epoch_accuracy.front();
  if (hooks.on_epoch) hooks.on_epoch(0, std::nan(""), result.accuracy);

  std::vector<std::size_t> order(train_indices.begin(), train_indices.end());
  Rng shuffle_rng(derive_seed({stream_seed, kShuffleTag}));
  std::uint64_t batch_counter = 0;
  bool have_best = false;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<Tensor> logits;
      std::vector<std::size_t> labels;
      Tensor loss;
      try {
        for (std::size_t i = start; i < end; ++i) {
          const auto gi = order[i];
          const Graph& g = dataset.graphs[gi];
          const auto contexts =
              model.contexts_for(g, derive_seed({stream_seed, kSampleTag, gi}), batch_counter, false);
          logits.push_back(model.forward(g, contexts, options).logits);
          labels.push_back(static_cast<std::size_t>(g.label()));
        }
        loss = cross_entropy_loss(concat_rows(logits), labels);
      } catch (const NumericError& e) {
        // Diverged weights surface as non-finite activations before the loss.
        throw TrainingError(epoch, e.what());
      }
      ++batch_counter;
      const double value = loss.item();
      if (!std::isfinite(value)) throw TrainingError(epoch, "non-finite training loss");
      params.zero_grad();
      backward(loss);
      adam_step(params.parameters(), adam);
      loss_total += value * static_cast<double>(end - start);
    }
    const double epoch_loss = loss_total / static_cast<double>(order.size());
    result.epoch_loss.push_back(epoch_loss);
    const double acc = evaluate_accuracy(model, dataset, eval_indices, cfg.eval_sampling, eval_seed, hooks);
    result.epoch_accuracy.push_back(acc);
    if (hooks.on_epoch) hooks.on_epoch(epoch, epoch_loss, acc);

    const bool take = cfg.selection == ModelSelection::kLastEpoch || !have_best || acc > result.accuracy;
    if (take) {
      have_best = true;
      result.selected_epoch = epoch;
      result.accuracy = acc;
      result.weights = params.snapshot();
    }
  }
  params.restore(result.weights);
  return result;
}

FoldResult train_fold(const Dataset& dataset, const FoldPlan& plan, std::size_t fold,
                      const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                      const TrainHooks& hooks) {
  if (fold >= kNumFolds) throw ConfigError("fold id must be in [0, 10)");
  if (plan.assignments.size() != dataset.graphs.size()) {
    throw ConfigError("fold plan does not cover the dataset");
  }
  if (model_cfg.input_dim != dataset.feature_dim()) {
    throw ConfigError("model input_dim " + std::to_string(model_cfg.input_dim) +
                      " does not match dataset feature width " + std::to_string(dataset.feature_dim()));
  }
  if (model_cfg.num_classes < dataset.num_classes) {
    throw ConfigError("model has fewer classes than the dataset");
  }
  const std::uint64_t seed = fold_seed(train_cfg.seed, fold);
  UGformer model(model_cfg, derive_seed({seed, kInitTag}));
  const auto train_idx = plan.train_indices(fold);
  const auto test_idx = plan.test_indices(fold);
  FoldResult r;
  r.fold = fold;
  r.test_size = test_idx.size();
  r.train = train_model(model, dataset, train_idx, test_idx, train_cfg, seed, hooks);
  return r;
}

Metrics Metrics::from_accuracies(std::vector<double> accuracies) {
  Metrics m;
  m.per_fold_accuracy = std::move(accuracies);
  if (m.per_fold_accuracy.empty()) return m;
  const double n = static_cast<double>(m.per_fold_accuracy.size());
  // Accumulating offsets from the first value keeps equal inputs exact.
  const double pivot = m.per_fold_accuracy.front();
  double offset = 0.0;
  for (double a : m.per_fold_accuracy) offset += a - pivot;
  m.mean = pivot + offset / n;
  double sq = 0.0;
  for (double a : m.per_fold_accuracy) sq += (a - m.mean) * (a - m.mean);
  m.std = std::sqrt(sq / n);
  return m;
}

Metrics Metrics::from_folds(std::span<const FoldResult> folds) {
  std::vector<double> acc;
  for (const auto& f : folds) acc.push_back(f.train.accuracy);
  Metrics m = from_accuracies(std::move(acc));
  std::size_t epochs = 0;
  for (const auto& f : folds) epochs = std::max(epochs, f.train.epoch_loss.size());
  m.per_epoch_loss.assign(epochs, 0.0);
  for (std::size_t e = 0; e < epochs; ++e) {
    std::size_t count = 0;
    for (const auto& f : folds) {
      if (e < f.train.epoch_loss.size()) {
        m.per_epoch_loss[e] += f.train.epoch_loss[e];
        ++count;
      }
    }
    m.per_epoch_loss[e] /= static_cast<double>(count);
  }
  return m;
}

CvResult run_cv(const Dataset& dataset, const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                const TrainHooks& hooks) {
  train_cfg.validate();
  CvResult cv;
  cv.plan = make_folds(dataset, train_cfg.seed);
  cv.folds.resize(kNumFolds);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto worker = [&] {
    for (std::size_t fold = next++; fold < kNumFolds; fold = next++) {
      try {
        cv.folds[fold] = train_fold(dataset, cv.plan, fold, model_cfg, train_cfg, hooks);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = kNumFolds;
      }
    }
  };
  const std::size_t workers = std::min(train_cfg.jobs, kNumFolds);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  cv.metrics = Metrics::from_folds(cv.folds);
  return cv;
}

std::string format_table_row(const std::string& name, const Metrics& metrics) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-12s %.2f ± %.2f", name.c_str(), 100.0 * metrics.mean,
                100.0 * metrics.std);
  return buf;
}

std::string format_metrics_table(const std::string& name, std::span<const FoldResult> folds,
                                 const Metrics& metrics) {
  std::ostringstream out;
  char buf[128];
  out << "fold  test_size  selected_epoch  accuracy(%)\n";
  for (const auto& f : folds) {
    std::snprintf(buf, sizeof(buf), "%4zu  %9zu  %14zu  %11.2f\n", f.fold, f.test_size,
                  f.train.selected_epoch, 100.0 * f.train.accuracy);
    out << buf;
  }
  out << format_table_row(name, metrics) << '\n';
  return out.str();
}

std::string format_metrics_records(std::span<const FoldResult> folds, const Metrics& metrics) {
  std::ostringstream out;
  for (const auto& f : folds) {
    out << "fold=" << f.fold << " accuracy=" << format_double(f.train.accuracy)
        << " selected_epoch=" << f.train.selected_epoch << " test_size=" << f.test_size << '\n';
  }
  for (std::size_t e = 0; e < metrics.per_epoch_loss.size(); ++e) {
    out << "epoch=" << e + 1 << " loss=" << format_double(metrics.per_epoch_loss[e]) << '\n';
  }
  out << "aggregate mean=" << format_double(metrics.mean) << " std=" << format_double(metrics.std)
      << " folds=" << metrics.per_fold_accuracy.size() << '\n';
  return out.str();
}

std::vector<MetricsRecord> parse_metrics_records(const std::string& text) {
  std::vector<MetricsRecord> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string word;
    MetricsRecord rec;
    while (words >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) {
        rec.kind = word;
        continue;
      }
      auto key = word.substr(0, eq);
      if (rec.kind.empty()) rec.kind = key;
      rec.fields.set(std::move(key), word.substr(eq + 1));
    }
    if (!rec.kind.empty()) records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace ugformer
