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

#include "ugformer/parameter.hpp"

#include <cmath>

#include "ugformer/error.hpp"

namespace ugformer {

Tensor ParameterStore::add(std::string name, Shape shape, Init init, Rng& rng) {
  if (find(name)) throw ContractError("duplicate parameter name '" + name + "'");
  Tensor t = Tensor::zeros(shape);
  auto values = t.mutable_data();
  switch (init) {
    case Init::kXavierUniform: {
      if (shape.size() != 2) {
        throw ContractError("xavier-uniform init needs a matrix, '" + name + "' is " +
                            shape_string(shape));
      }
      const double bound = std::sqrt(6.0 / static_cast<double>(shape[0] + shape[1]));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (auto& v : values) v = dist(rng);
      break;
    }
    case Init::kZeros:
      break;
    case Init::kOnes:
      for (auto& v : values) v = 1.0;
      break;
  }
  t.set_requires_grad(true);
  params_.push_back({std::move(name), t, init});
  return t;
}

const Parameter* ParameterStore::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Parameter* ParameterStore::find(const std::string& name) {
  for (auto& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::size_t ParameterStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.tensor.numel();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

std::vector<std::vector<double>> ParameterStore::snapshot() const {
  std::vector<std::vector<double>> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.emplace_back(p.tensor.data().begin(), p.tensor.data().end());
  return out;
}

void ParameterStore::restore(const std::vector<std::vector<double>>& values) {
  if (values.size() != params_.size()) throw ContractError("snapshot has wrong parameter count");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto dst = params_[i].tensor.mutable_data();
    if (values[i].size() != dst.size()) {
      throw DimensionError("snapshot entry for '" + params_[i].name + "' has wrong size");
    }
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

}  // namespace ugformer
