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

#ifndef UGFORMER_PARAMETER_HPP_
#define UGFORMER_PARAMETER_HPP_

#include <string>
#include <vector>

#include "ugformer/rng.hpp"
#include "ugformer/tensor.hpp"

namespace ugformer {

enum class Init { kXavierUniform, kZeros, kOnes };

struct Parameter {
  std::string name;
  Tensor tensor;
  Init init = Init::kZeros;
};

// Named trainable tensors in registration order. Names are unique.
class ParameterStore {
 public:
  // Registers and initializes a new trainable tensor. Xavier-uniform draws
  // from U(-a, a) with a = sqrt(6 / (fan_in + fan_out)), where a [r x c]
  // shape has fan_in = r and fan_out = c.
  Tensor add(std::string name, Shape shape, Init init, Rng& rng);

  const std::vector<Parameter>& parameters() const { return params_; }
  std::vector<Parameter>& parameters() { return params_; }
  const Parameter* find(const std::string& name) const;
  Parameter* find(const std::string& name);
  std::size_t size() const { return params_.size(); }
  std::size_t num_scalars() const;

  void zero_grad();

  // Value-only copy of every parameter, in registration order.
  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& values);

 private:
  std::vector<Parameter> params_;
};

}  // namespace ugformer

#endif  // UGFORMER_PARAMETER_HPP_
