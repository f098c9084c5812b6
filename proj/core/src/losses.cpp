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

#include "ugformer/losses.hpp"

#include <algorithm>
#include <vector>

#include "ugformer/error.hpp"
#include "ugformer/ops.hpp"

namespace ugformer {

Tensor cross_entropy_loss(const Tensor& logits, std::span<const std::size_t> labels) {
  return cross_entropy(logits, labels);
}

Tensor sampled_softmax_loss(const Tensor& node_embedding, std::uint32_t center,
                            const Tensor& embedding_table, std::span<const std::uint32_t> negatives) {
  if (negatives.empty()) throw ContractError("sampled_softmax_loss: empty negative set");
  if (std::find(negatives.begin(), negatives.end(), center) != negatives.end()) {
    throw ContractError("sampled_softmax_loss: negatives contain the center node");
  }
  const std::size_t dim = node_embedding.numel();
  if (embedding_table.rank() != 2 || embedding_table.cols() != dim) {
    throw DimensionError("sampled_softmax_loss: table " + shape_string(embedding_table.shape()) +
                         " does not match embedding width " + std::to_string(dim));
  }
  std::vector<std::uint32_t> candidates;
  candidates.reserve(negatives.size() + 1);
  candidates.push_back(center);
  candidates.insert(candidates.end(), negatives.begin(), negatives.end());
  Tensor rows = gather_rows(embedding_table, candidates);
  Tensor scores = matmul(rows, reshape(node_embedding, {dim, 1}));
  const std::size_t target = 0;
  return cross_entropy(reshape(scores, {1, candidates.size()}), {&target, 1});
}

}  // namespace ugformer
