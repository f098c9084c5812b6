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

#ifndef UGFORMER_LOSSES_HPP_
#define UGFORMER_LOSSES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

#include "ugformer/tensor.hpp"

namespace ugformer {

// Mean negative log-likelihood of `labels` under softmax(logits), logits [B x C].
Tensor cross_entropy_loss(const Tensor& logits, std::span<const std::size_t> labels);

// -log( exp(o_c . e) / sum_{u in {c} + negatives} exp(o_u . e) )
// with c = center, e = node_embedding [D] and o = embedding_table [M x D].
// Negatives must be non-empty and must not contain the center.
Tensor sampled_softmax_loss(const Tensor& node_embedding, std::uint32_t center,
                            const Tensor& embedding_table, std::span<const std::uint32_t> negatives);

}  // namespace ugformer

#endif  // UGFORMER_LOSSES_HPP_
