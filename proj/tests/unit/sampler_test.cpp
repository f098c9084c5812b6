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

#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"
#include "ugformer/error.hpp"
#include "ugformer/rng.hpp"
#include "ugformer/sampler.hpp"

namespace ugformer {
namespace {

using testing::Edges;

Graph star(std::size_t leaves) {
  Edges edges;
  for (NodeId leaf = 1; leaf <= leaves; ++leaf) edges.emplace_back(0, leaf);
  return Graph::from_edges(leaves + 1, edges, std::vector<double>(leaves + 1, 1.0), 1, 0);
}

// Reference outputs of SplitMix64 seeded with 0.
TEST(SplitMix64Test, MatchesReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng(), 0x06c45d188009454fULL);
}

TEST(SamplerTest, TakesAllNeighborsWhenDegreeFits) {
  const auto samples = sample_neighbors(star(3), 8, 1, 0);
  ASSERT_EQ(samples.size(), 4u);
  EXPECT_EQ(samples[0].center, 0u);
  EXPECT_EQ(samples[0].context, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(samples[2].context, (std::vector<NodeId>{2, 0}));
}

TEST(SamplerTest, IsolatedNodeContextIsItself) {
  const Graph g = Graph::from_edges(2, Edges{}, {1.0, 1.0}, 1, 0);
  const auto samples = sample_neighbors(g, 4, 1, 0);
  EXPECT_EQ(samples[1].context, std::vector<NodeId>{1});
}

TEST(SamplerTest, ContextsAreClosedNeighborhoodSubsets) {
  const Graph g = testing::random_graph(30, 0.4, 1, 3);
  for (std::uint64_t batch = 0; batch < 20; ++batch) {
    const auto samples = sample_neighbors(g, 5, 7, batch);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const auto& ctx = samples[v].context;
      EXPECT_EQ(samples[v].center, v);
      ASSERT_FALSE(ctx.empty());
      EXPECT_EQ(ctx.front(), v);
      EXPECT_EQ(ctx.size(), std::min<std::size_t>(g.degree(v), 5) + 1);
      EXPECT_TRUE(std::is_sorted(ctx.begin() + 1, ctx.end()));
      EXPECT_TRUE(std::adjacent_find(ctx.begin() + 1, ctx.end()) == ctx.end());
      const auto nb = g.neighbors(v);
      for (auto it = ctx.begin() + 1; it != ctx.end(); ++it) {
        EXPECT_TRUE(std::binary_search(nb.begin(), nb.end(), *it));
      }
    }
  }
}

TEST(SamplerTest, DeterministicInSeedAndBatch) {
  const Graph g = testing::random_graph(25, 0.5, 1, 4);
  EXPECT_EQ(sample_neighbors(g, 3, 11, 5), sample_neighbors(g, 3, 11, 5));
  EXPECT_NE(sample_neighbors(g, 3, 11, 5), sample_neighbors(g, 3, 11, 6));
  EXPECT_NE(sample_neighbors(g, 3, 11, 5), sample_neighbors(g, 3, 12, 5));
}

TEST(SamplerTest, FullNeighborhoodConstant) {
  const Graph g = testing::random_graph(12, 0.6, 1, 6);
  const auto samples = sample_neighbors(g, kFullNeighborhood, 1, 2);
  for (NodeId v = 0; v < g.num_nodes(); ++v) EXPECT_EQ(samples[v].context.size(), g.degree(v) + 1);
}

TEST(SamplerTest, ZeroSampleSizeIsAConfigError) {
  EXPECT_THROW(sample_neighbors(star(2), 0, 1, 0), ConfigError);
}

// Degree-20 hub with N=4: every leaf should be drawn with probability 4/20.
TEST(SamplerTest, UniformSelectionFrequencies) {
  const Graph g = star(20);
  constexpr std::size_t kDraws = 100000;
  std::vector<double> counts(21, 0.0);
  for (std::uint64_t batch = 0; batch < kDraws; ++batch) {
    const auto samples = sample_neighbors(g, 4, 2024, batch);
    ASSERT_EQ(samples[0].context.size(), 5u);
    for (std::size_t i = 1; i < 5; ++i) counts[samples[0].context[i]] += 1.0;
  }
  double chi2 = 0.0;
  const double expected = kDraws * 4.0 / 20.0;
  for (NodeId leaf = 1; leaf <= 20; ++leaf) {
    EXPECT_NEAR(counts[leaf] / kDraws, 0.2, 0.01) << "leaf " << leaf;
    chi2 += (counts[leaf] - expected) * (counts[leaf] - expected) / expected;
  }
  // Upper 1% point of the chi-square distribution with 19 degrees of freedom.
  EXPECT_LT(chi2, 36.191);
}

}  // namespace
}  // namespace ugformer
