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

#include "ugformer/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <stdexcept>

#include "CLI11.hpp"
#include "ugformer/checkpoint.hpp"
#include "ugformer/error.hpp"
#include "ugformer/harness.hpp"
#include "ugformer/log.hpp"
#include "ugformer/rng.hpp"
#include "ugformer/unsupervised.hpp"

namespace ugformer::cli {
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kModelInitTag = 0x756e7375;

// Keys accepted in config files. Manifest-only keys are read back silently.
const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "dataset", "data_root", "features", "degree_cap", "variant", "layers", "steps", "dim",
      "hidden", "neighbors", "num_classes", "input_dim", "attention_cap", "context_mode",
      "layer_norm_eps", "lr", "epochs", "batch_size", "seed", "eval_sampling", "selection",
      "jobs", "cv", "fold", "out_dir", "negatives"};
  return keys;
}

const std::set<std::string>& manifest_keys() {
  static const std::set<std::string> keys = {
      "command", "tool_version", "started_at", "finished_at", "wall_seconds", "manifest_file",
      "metrics_file", "metrics_table_file", "checkpoint_file", "embeddings_file", "loss_file",
      "node_table_file", "num_graphs"};
  return keys;
}

// A command-line option that, when given, overrides the same key read from
// --config.
class Overrides {
 public:
  explicit Overrides(CLI::App* app) : app_(app) {}

  CLI::Option* add(const std::string& flag, const std::string& key, const std::string& help) {
    items_.push_back(std::make_unique<Item>());
    Item& item = *items_.back();
    item.key = key;
    item.option = app_->add_option(flag, item.value, help);
    return item.option;
  }

  bool given(const std::string& key) const {
    for (const auto& item : items_) {
      if (item->key == key && item->option->count() > 0) return true;
    }
    return false;
  }

  void apply(KeyValueDoc& doc) const {
    for (const auto& item : items_) {
      if (item->option->count() > 0) doc.set(item->key, item->value);
    }
  }

 private:
  struct Item {
    std::string key;
    std::string value;
    CLI::Option* option = nullptr;
  };
  CLI::App* app_;
  std::vector<std::unique_ptr<Item>> items_;
};

void add_dataset_options(Overrides& o) {
  o.add("--dataset", "dataset", "Dataset name; files are read from <data-root>/<name>");
  o.add("--data-root", "data_root",
        std::string("Directory holding dataset folders (default: $") + kDataRootEnv + " or ./data)");
  o.add("--features", "features", "Node features: auto, node-labels, degree or constant");
  o.add("--degree-cap", "degree_cap", "Largest degree given its own one-hot column");
}

void add_model_options(Overrides& o) {
  o.add("--variant", "variant", "1: sampled neighbors, 2: all node pairs plus GCN");
  o.add("--layers", "layers", "Number of layers K");
  o.add("--steps", "steps", "Recurrent steps T per layer (variant 1)");
  o.add("--dim", "dim", "Node state width d");
  o.add("--hidden", "hidden", "Hidden width of the feed-forward transition");
  o.add("--neighbors", "neighbors", "Sampled neighbors N per node (variant 1)");
  o.add("--context-mode", "context_mode", "center-write or strict");
  o.add("--attention-cap", "attention_cap", "Largest graph accepted by variant 2");
}

void add_eval_options(Overrides& o) {
  o.add("--eval-sampling", "eval_sampling", "fixed-seed or full-neighborhood");
}

KeyValueDoc resolve(const std::string& config_path, const Overrides& overrides) {
  KeyValueDoc doc;
  if (!config_path.empty()) {
    if (!fs::is_regular_file(config_path)) throw UsageError("config file not found: " + config_path);
    doc = KeyValueDoc::read(config_path);
    for (const auto& [key, value] : doc.entries()) {
      if (!config_keys().contains(key) && !manifest_keys().contains(key)) {
        log_warning("ignoring unknown config key '" + key + "' in " + config_path);
      }
    }
  }
  overrides.apply(doc);
  return doc;
}

fs::path data_root(const KeyValueDoc& doc) {
  if (doc.contains("data_root")) return doc.get_string("data_root");
  if (const char* env = std::getenv(kDataRootEnv); env != nullptr && *env != '\0') return env;
  return "data";
}

// Loads the dataset named in `doc` and applies the requested feature mode.
// Records the resolved root and feature mode back into `doc`.
Dataset load_dataset(KeyValueDoc& doc) {
  if (!doc.contains("dataset")) throw UsageError("--dataset is required");
  const std::string name = doc.get_string("dataset");
  const fs::path root = fs::absolute(data_root(doc));
  const fs::path dir = root / name;
  if (!fs::is_directory(dir)) throw UsageError("dataset directory not found: " + dir.string());
  Dataset ds = load_tud_dataset(dir, name);

  const std::string features = doc.contains("features") ? doc.get_string("features") : "auto";
  const std::size_t cap = doc.contains("degree_cap") ? doc.get_uint("degree_cap") : 1000;
  if (features != "auto") {
    switch (feature_mode_from_string(features)) {
      case FeatureMode::kNodeLabels:
        if (ds.feature_mode != FeatureMode::kNodeLabels) {
          throw ConfigError("dataset " + name + " has no node labels");
        }
        break;
      case FeatureMode::kDegreeOneHot:
        ds = degree_features(ds, cap);
        break;
      case FeatureMode::kConstant:
        ds = constant_features(ds);
        break;
    }
  }
  doc.set("data_root", root.string());
  doc.set("features", to_string(ds.feature_mode));
  doc.set("degree_cap", std::uint64_t{cap});
  return ds;
}

ModelConfig model_config_for(const KeyValueDoc& doc, const Dataset& ds) {
  ModelConfig cfg = ModelConfig::read_from(doc);
  cfg.input_dim = ds.feature_dim();
  cfg.num_classes = std::max<std::size_t>(ds.num_classes, 2);
  cfg.validate();
  return cfg;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

fs::path prepare_out_dir(const KeyValueDoc& doc) {
  if (!doc.contains("out_dir")) throw UsageError("--out-dir is required");
  const fs::path dir = doc.get_string("out_dir");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void save_weights(const ModelConfig& cfg, const std::vector<std::vector<double>>& weights,
                  const fs::path& path) {
  UGformer model(cfg, 0);
  model.parameters().restore(weights);
  save_checkpoint(model.parameters(), path);
}

int cmd_train(const std::string& config_path, const Overrides& o, bool cv_flag, std::ostream& out) {
  KeyValueDoc doc = resolve(config_path, o);
  if (cv_flag) doc.set("cv", true);
  if (cv_flag && o.given("fold")) throw UsageError("--fold and --cv are mutually exclusive");
  if (o.given("fold")) doc.set("cv", false);
  const bool cv = doc.contains("cv") && doc.get_bool("cv");
  if (!cv && !doc.contains("fold")) throw UsageError("choose a single --fold <k> or --cv");

  const int variant = doc.contains("variant") ? static_cast<int>(doc.get_int("variant")) : 1;
  if (o.given("steps") && variant == 2) throw UsageError("--steps only applies to --variant 1");

  Dataset ds = load_dataset(doc);
  const ModelConfig model_cfg = model_config_for(doc, ds);
  TrainConfig train_cfg = TrainConfig::read_from(doc);
  train_cfg.validate();
  std::size_t fold = 0;
  if (!cv) {
    fold = doc.get_uint("fold");
    if (fold >= kNumFolds) throw UsageError("--fold must be in [0, 10)");
  }
  const fs::path dir = prepare_out_dir(doc);

  KeyValueDoc manifest;
  manifest.set("command", "train");
  manifest.set("tool_version", UGFORMER_VERSION);
  for (const char* key : {"dataset", "data_root", "features", "degree_cap"}) {
    manifest.set(key, doc.get_string(key));
  }
  manifest.set("num_graphs", std::uint64_t{ds.graphs.size()});
  model_cfg.write_to(manifest);
  train_cfg.write_to(manifest);
  manifest.set("cv", cv);
  if (!cv) manifest.set("fold", std::uint64_t{fold});
  manifest.set("out_dir", dir.string());
  manifest.set("manifest_file", kManifestFile);
  manifest.set("metrics_file", kMetricsFile);
  manifest.set("metrics_table_file", kMetricsTableFile);
  manifest.set("checkpoint_file", cv ? "checkpoint_fold<k>.bin" : kCheckpointFile);
  manifest.set("started_at", utc_now());
  manifest.write(dir / kManifestFile);

  const auto start = std::chrono::steady_clock::now();
  std::vector<FoldResult> folds;
  if (cv) {
    CvResult result = run_cv(ds, model_cfg, train_cfg);
    folds = std::move(result.folds);
  } else {
    const FoldPlan plan = make_folds(ds, train_cfg.seed);
    folds.push_back(train_fold(ds, plan, fold, model_cfg, train_cfg));
  }
  const Metrics metrics = Metrics::from_folds(folds);
  for (const auto& f : folds) {
    save_weights(model_cfg, f.train.weights, dir / checkpoint_name(cv, f.fold));
  }
  write_text(dir / kMetricsFile, format_metrics_records(folds, metrics));
  const std::string table = format_metrics_table(ds.name, folds, metrics);
  write_text(dir / kMetricsTableFile, table);
  out << table;

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.set("finished_at", utc_now());
  manifest.set("wall_seconds", seconds);
  manifest.write(dir / kManifestFile);
  return kExitOk;
}

struct RunContext {
  KeyValueDoc manifest;
  Dataset dataset;
  ModelConfig model_cfg;
  TrainConfig train_cfg;
  bool cv = false;
  std::size_t fold = 0;
};

RunContext open_run(const std::string& run_dir, const Overrides& o, std::size_t fold_flag,
                    bool fold_given) {
  const fs::path manifest_path = fs::path(run_dir) / kManifestFile;
  if (!fs::is_regular_file(manifest_path)) {
    throw UsageError("no run manifest at " + manifest_path.string());
  }
  RunContext run;
  run.manifest = KeyValueDoc::read(manifest_path);
  o.apply(run.manifest);
  run.dataset = load_dataset(run.manifest);
  run.model_cfg = model_config_for(run.manifest, run.dataset);
  run.train_cfg = TrainConfig::read_from(run.manifest);
  run.cv = run.manifest.contains("cv") && run.manifest.get_bool("cv");
  if (fold_given) {
    run.fold = fold_flag;
  } else if (!run.cv && run.manifest.contains("fold")) {
    run.fold = run.manifest.get_uint("fold");
  }
  if (run.fold >= kNumFolds) throw UsageError("--fold must be in [0, 10)");
  return run;
}

UGformer load_model(const RunContext& run, const std::string& run_dir,
                    const std::string& checkpoint) {
  UGformer model(run.model_cfg, 0);
  const fs::path path = checkpoint.empty()
                            ? fs::path(run_dir) / checkpoint_name(run.cv, run.fold)
                            : fs::path(checkpoint);
  load_checkpoint(model.parameters(), path);
  return model;
}

int cmd_eval(const std::string& run_dir, const Overrides& o, std::size_t fold, bool fold_given,
             const std::string& split, const std::string& checkpoint, std::ostream& out) {
  if (split != "test" && split != "train") throw UsageError("--split must be test or train");
  const RunContext run = open_run(run_dir, o, fold, fold_given);
  const UGformer model = load_model(run, run_dir, checkpoint);
  const FoldPlan plan = make_folds(run.dataset, run.train_cfg.seed);
  const auto indices = split == "test" ? plan.test_indices(run.fold) : plan.train_indices(run.fold);
  const double acc = evaluate_accuracy(model, run.dataset, indices, run.train_cfg.eval_sampling,
                                       eval_seed_for(run.train_cfg));
  out << "accuracy=" << format_double(acc) << " fold=" << run.fold << " split=" << split
      << " graphs=" << indices.size() << '\n';
  return kExitOk;
}

int cmd_export(const std::string& run_dir, const Overrides& o, std::size_t fold, bool fold_given,
               const std::string& checkpoint, const std::string& out_path, std::ostream& out) {
  const RunContext run = open_run(run_dir, o, fold, fold_given);
  const UGformer model = load_model(run, run_dir, checkpoint);
  const fs::path path = out_path.empty() ? fs::path(run_dir) / kEmbeddingsFile : fs::path(out_path);
  export_embeddings(run.dataset, model, run.train_cfg.eval_sampling, eval_seed_for(run.train_cfg),
                    path);
  out << "wrote " << run.dataset.total_nodes() << " node embeddings to " << path.string() << '\n';
  return kExitOk;
}

int cmd_unsup(const std::string& config_path, const Overrides& o, std::ostream& out) {
  KeyValueDoc doc = resolve(config_path, o);
  const int variant = doc.contains("variant") ? static_cast<int>(doc.get_int("variant")) : 1;
  if (o.given("steps") && variant == 2) throw UsageError("--steps only applies to --variant 1");
  Dataset ds = load_dataset(doc);
  const ModelConfig model_cfg = model_config_for(doc, ds);
  UnsupervisedConfig cfg;
  if (doc.contains("lr")) cfg.lr = doc.get_double("lr");
  if (doc.contains("epochs")) cfg.epochs = doc.get_uint("epochs");
  if (doc.contains("negatives")) cfg.num_negatives = doc.get_uint("negatives");
  if (doc.contains("batch_size")) cfg.batch_size = doc.get_uint("batch_size");
  if (doc.contains("seed")) cfg.seed = doc.get_uint("seed");
  cfg.validate();
  const fs::path dir = prepare_out_dir(doc);

  KeyValueDoc manifest;
  manifest.set("command", "unsup-train");
  manifest.set("tool_version", UGFORMER_VERSION);
  for (const char* key : {"dataset", "data_root", "features", "degree_cap"}) {
    manifest.set(key, doc.get_string(key));
  }
  manifest.set("num_graphs", std::uint64_t{ds.graphs.size()});
  model_cfg.write_to(manifest);
  manifest.set("lr", cfg.lr);
  manifest.set("epochs", std::uint64_t{cfg.epochs});
  manifest.set("negatives", std::uint64_t{cfg.num_negatives});
  manifest.set("batch_size", std::uint64_t{cfg.batch_size});
  manifest.set("seed", cfg.seed);
  manifest.set("out_dir", dir.string());
  manifest.set("loss_file", kLossFile);
  manifest.set("embeddings_file", kEmbeddingsFile);
  manifest.set("checkpoint_file", kCheckpointFile);
  manifest.set("node_table_file", kNodeTableFile);
  manifest.set("started_at", utc_now());
  manifest.write(dir / kManifestFile);

  const auto start = std::chrono::steady_clock::now();
  UGformer model(model_cfg, derive_seed({cfg.seed, kModelInitTag}));
  std::string losses;
  const auto result = train_unsupervised(model, ds, cfg, [&](std::size_t epoch, double loss) {
    const std::string line = "epoch=" + std::to_string(epoch) + " loss=" + format_double(loss) + '\n';
    losses += line;
    out << line;
  });
  write_text(dir / kLossFile, losses);
  export_node_table(ds, result, dir / kEmbeddingsFile);
  save_checkpoint(model.parameters(), dir / kCheckpointFile);
  save_checkpoint(result.table, dir / kNodeTableFile);

  manifest.set("finished_at", utc_now());
  manifest.set("wall_seconds",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  manifest.write(dir / kManifestFile);
  return kExitOk;
}

}  // namespace

std::string checkpoint_name(bool cross_validation, std::size_t fold) {
  return cross_validation ? "checkpoint_fold" + std::to_string(fold) + ".bin" : kCheckpointFile;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph transformer training and evaluation", "ugformer"};
  app.set_version_flag("--version", UGFORMER_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  bool cv_flag = false;
  CLI::App* train = app.add_subcommand("train", "Train with one fold held out, or all ten");
  Overrides train_opts(train);
  train->add_option("--config", config_path, "Key-value config file; flags take precedence");
  add_dataset_options(train_opts);
  add_model_options(train_opts);
  train_opts.add("--lr", "lr", "Adam learning rate");
  train_opts.add("--epochs", "epochs", "Training epochs");
  train_opts.add("--batch-size", "batch_size", "Graphs per optimizer step");
  train_opts.add("--seed", "seed", "Run seed");
  train_opts.add("--fold", "fold", "Train on the other nine folds and hold this one out");
  train->add_flag("--cv", cv_flag, "Run all ten folds");
  train_opts.add("--out-dir", "out_dir", "Directory for the manifest, metrics and checkpoints");
  train_opts.add("--jobs", "jobs", "Folds trained concurrently");
  add_eval_options(train_opts);
  train_opts.add("--selection", "selection", "best-epoch or last-epoch");

  std::string run_dir;
  std::size_t fold = 0;
  std::string split = "test";
  std::string checkpoint;
  std::string out_path;
  CLI::App* eval = app.add_subcommand("eval", "Report held-out accuracy of a trained run");
  Overrides eval_opts(eval);
  eval->add_option("--run-dir", run_dir, "Directory written by train")->required();
  CLI::Option* eval_fold = eval->add_option("--fold", fold, "Fold to evaluate");
  eval->add_option("--split", split, "test or train");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint to load instead of the run's own");
  eval_opts.add("--data-root", "data_root", "Override the dataset root recorded in the run");
  add_eval_options(eval_opts);

  CLI::App* exp = app.add_subcommand("export-embeddings", "Write per-node embeddings as CSV");
  Overrides export_opts(exp);
  exp->add_option("--run-dir", run_dir, "Directory written by train")->required();
  CLI::Option* export_fold = exp->add_option("--fold", fold, "Fold whose checkpoint to use");
  exp->add_option("--checkpoint", checkpoint, "Checkpoint to load instead of the run's own");
  exp->add_option("--out", out_path, "Output CSV (default: <run-dir>/embeddings.csv)");
  export_opts.add("--data-root", "data_root", "Override the dataset root recorded in the run");
  add_eval_options(export_opts);

  CLI::App* unsup = app.add_subcommand("unsup-train", "Train node embeddings without labels");
  Overrides unsup_opts(unsup);
  unsup->add_option("--config", config_path, "Key-value config file; flags take precedence");
  add_dataset_options(unsup_opts);
  add_model_options(unsup_opts);
  unsup_opts.add("--lr", "lr", "Adam learning rate");
  unsup_opts.add("--epochs", "epochs", "Training epochs");
  unsup_opts.add("--negatives", "negatives", "Sampled nodes in each softmax denominator");
  unsup_opts.add("--batch-size", "batch_size", "Graphs per optimizer step");
  unsup_opts.add("--seed", "seed", "Run seed");
  unsup_opts.add("--out-dir", "out_dir", "Directory for the manifest, loss and embeddings");

  std::vector<const char*> argv{"ugformer"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const LogSink previous = set_log_sink([&err](LogLevel level, std::string_view message) {
    err << (level == LogLevel::kWarning ? "warning: " : "") << message << '\n';
  });
  int code = kExitFailure;
  try {
    if (*train) {
      code = cmd_train(config_path, train_opts, cv_flag, out);
    } else if (*eval) {
      code = cmd_eval(run_dir, eval_opts, fold, eval_fold->count() > 0, split, checkpoint, out);
    } else if (*exp) {
      code = cmd_export(run_dir, export_opts, fold, export_fold->count() > 0, checkpoint, out_path,
                        out);
    } else if (*unsup) {
      code = cmd_unsup(config_path, unsup_opts, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
  }
  set_log_sink(previous);
  return code;
}

}  // namespace ugformer::cli
