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

#include "ugformer/sampler.hpp"

#include <algorithm>

#include "ugformer/error.hpp"
#include "ugformer/rng.hpp"

namespace ugformer {

std::vector<NeighborSample> sample_neighbors(const Graph& g, std::size_t n_per_node,
                                             std::uint64_t rng_seed, std::uint64_t batch_id) {
  if (n_per_node < 1) throw ConfigError("sample_neighbors: need at least one neighbor per node");
  std::vector<NeighborSample> samples(g.num_nodes());
  std::vector<NodeId> pool;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto& s = samples[v];
    s.center = v;
    const auto nbrs = g.neighbors(v);
    s.context.reserve(std::min(nbrs.size(), n_per_node) + 1);
    s.context.push_back(v);
    if (nbrs.size() <= n_per_node) {
      s.context.insert(s.context.end(), nbrs.begin(), nbrs.end());
      continue;
    }
    // Partial Fisher-Yates: the first n_per_node slots become a uniform
    // without-replacement draw.
    pool.assign(nbrs.begin(), nbrs.end());
    SplitMix64 rng(derive_seed({rng_seed, batch_id, v}));
    for (std::size_t i = 0; i < n_per_node; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_per_node));
    s.context.insert(s.context.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_per_node));
  }
  return samples;
}

}  // namespace ugformer
