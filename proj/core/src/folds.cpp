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

#include "ugformer/folds.hpp"

#include <algorithm>

#include "ugformer/error.hpp"
#include "ugformer/rng.hpp"

namespace ugformer {

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::size_t FoldPlan::fold_size(std::size_t fold) const {
  return static_cast<std::size_t>(std::count(assignments.begin(), assignments.end(), fold));
}

FoldPlan make_folds(const Dataset& dataset, std::uint64_t seed) {
  const std::size_t n = dataset.graphs.size();
  if (n < kNumFolds) {
    throw ConfigError("10-fold cross-validation needs at least 10 graphs, dataset '" +
                      dataset.name + "' has " + std::to_string(n));
  }
  std::size_t num_classes = dataset.num_classes;
  for (const auto& g : dataset.graphs) {
    num_classes = std::max(num_classes, static_cast<std::size_t>(g.label()) + 1);
  }
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(dataset.graphs[i].label())].push_back(i);
  }

  FoldPlan plan;
  plan.seed = seed;
  plan.assignments.assign(n, 0);
  Rng rng(derive_seed({seed, 0x666f6c6473ULL}));
  std::size_t position = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto idx : members) plan.assignments[idx] = position++ % kNumFolds;
  }
  return plan;
}

}  // namespace ugformer
