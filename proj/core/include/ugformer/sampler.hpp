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

#ifndef UGFORMER_SAMPLER_HPP_
#define UGFORMER_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ugformer/graph.hpp"

namespace ugformer {

// Closed sampled neighborhood of one node. context[0] is always the center;
// the remaining entries are distinct neighbors of the center in ascending order.
struct NeighborSample {
  NodeId center = 0;
  std::vector<NodeId> context;

  friend bool operator==(const NeighborSample&, const NeighborSample&) = default;
};

// Passing this as n_per_node takes every neighbor of every node.
inline constexpr std::size_t kFullNeighborhood = std::numeric_limits<std::size_t>::max();

// One sample per node, index-aligned with node ids. A node with at most
// n_per_node neighbors keeps all of them; otherwise n_per_node neighbors are
// drawn uniformly without replacement. Results depend only on
// (rng_seed, batch_id, node), never on call order.
std::vector<NeighborSample> sample_neighbors(const Graph& g, std::size_t n_per_node,
                                             std::uint64_t rng_seed, std::uint64_t batch_id);

}  // namespace ugformer

#endif  // UGFORMER_SAMPLER_HPP_
