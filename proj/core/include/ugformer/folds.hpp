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

#ifndef UGFORMER_FOLDS_HPP_
#define UGFORMER_FOLDS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ugformer/graph.hpp"

namespace ugformer {

inline constexpr std::size_t kNumFolds = 10;

// Assignment of every graph of a dataset to one of ten cross-validation folds.
struct FoldPlan {
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // per graph, in [0, kNumFolds)

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::size_t fold_size(std::size_t fold) const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

// Stratified assignment: graphs of each class are shuffled with `seed` and
// dealt round-robin, with the dealing position carried across classes so
// overall fold sizes also differ by at most one. Throws ConfigError when the
// dataset has fewer than ten graphs.
FoldPlan make_folds(const Dataset& dataset, std::uint64_t seed);

}  // namespace ugformer

#endif  // UGFORMER_FOLDS_HPP_
