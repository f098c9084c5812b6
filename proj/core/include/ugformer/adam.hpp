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

#ifndef UGFORMER_ADAM_HPP_
#define UGFORMER_ADAM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ugformer/parameter.hpp"

namespace ugformer {

struct AdamState {
  std::size_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

// One Adam update with bias correction:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   w <- w - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
// Moment buffers are created on the first call. Throws ContractError if a
// parameter has no gradient buffer.
void adam_step(std::span<Parameter> params, AdamState& state);

}  // namespace ugformer

#endif  // UGFORMER_ADAM_HPP_
