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

#include <cmath>
#include <fstream>
#include <numeric>

#include "test_support.hpp"
#include "ugformer/adam.hpp"
#include "ugformer/checkpoint.hpp"
#include "ugformer/error.hpp"
#include "ugformer/keyvalue.hpp"
#include "ugformer/ops.hpp"
#include "ugformer/parameter.hpp"

namespace ugformer {
namespace {

using testing::check_gradients;
using testing::random_tensor;

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

// Weighted sum with fixed random weights so every output element carries a
// distinct gradient.
Tensor probe_loss(const Tensor& y, std::uint64_t seed = 99) {
  Rng rng(seed);
  const Tensor w = Tensor::from_data({y.numel()}, testing::uniform_values(y.numel(), rng));
  return sum(matmul(reshape(y, {1, y.numel()}), reshape(w, {y.numel(), 1})));
}

TEST(TensorTest, ShapeAndDataAgree) {
  const Tensor t = Tensor::zeros({3, 4});
  EXPECT_EQ(t.numel(), 12u);
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.cols(), 4u);
  EXPECT_THROW(Tensor::from_data({2, 2}, {1, 2, 3}), DimensionError);
}

TEST(MatmulTest, IdentityLeavesInputUnchanged) {
  Rng rng(1);
  const Tensor x = random_tensor({3, 5}, rng);
  const Tensor eye = Tensor::from_data({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(values(matmul(eye, x)), values(x));
}

TEST(MatmulTest, OneByOne) {
  const Tensor c = matmul(Tensor::from_data({1, 1}, {2}), Tensor::from_data({1, 1}, {3}));
  EXPECT_EQ(values(c), std::vector<double>{6});
}

TEST(MatmulTest, MatchesTripleLoop) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor a = random_tensor({4, 5}, rng);
    const Tensor b = random_tensor({5, 3}, rng);
    const Tensor c = matmul(a, b);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        double expected = 0.0;
        for (std::size_t k = 0; k < 5; ++k) expected += a(i, k) * b(k, j);
        EXPECT_NEAR(c(i, j), expected, 1e-12);
      }
    }
  }
}

TEST(MatmulTest, ShapeMismatchNamesBothShapes) {
  try {
    matmul(Tensor::zeros({2, 3}), Tensor::zeros({4, 2}));
    FAIL();
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2x3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("4x2"), std::string::npos) << msg;
  }
}

TEST(MatmulTest, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  std::vector<Tensor> in = {random_tensor({3, 4}, rng), random_tensor({4, 2}, rng)};
  const auto r = check_gradients(in, [&] { return probe_loss(matmul(in[0], in[1])); });
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(SoftmaxTest, EqualValuesGiveUniform) {
  const Tensor y = softmax_rows(Tensor::filled({1, 4}, 2.5));
  for (double v : y.data()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(SoftmaxTest, ClosedForm) {
  const Tensor y = softmax_rows(Tensor::from_data({1, 2}, {0.0, std::log(3.0)}));
  EXPECT_NEAR(y(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(y(0, 1), 0.75, 1e-15);
}

TEST(SoftmaxTest, MatchesExtendedPrecision) {
  Rng rng(4);
  const Tensor x = Tensor::from_data({6, 7}, testing::uniform_values(42, rng, -20.0, 20.0));
  const Tensor y = softmax_rows(x);
  for (std::size_t i = 0; i < 6; ++i) {
    long double total = 0.0L;
    for (std::size_t j = 0; j < 7; ++j) total += std::exp(static_cast<long double>(x(i, j)));
    double row = 0.0;
    for (std::size_t j = 0; j < 7; ++j) {
      const long double expected = std::exp(static_cast<long double>(x(i, j))) / total;
      EXPECT_NEAR(y(i, j), static_cast<double>(expected), 1e-12);
      row += y(i, j);
    }
    EXPECT_NEAR(row, 1.0, 1e-6);
  }
}

TEST(SoftmaxTest, ShiftInvariantAndStable) {
  Rng rng(5);
  const Tensor x = random_tensor({3, 5}, rng, false);
  std::vector<double> shifted = values(x);
  for (auto& v : shifted) v += 800.0;
  const Tensor a = softmax_rows(x);
  const Tensor b = softmax_rows(Tensor::from_data({3, 5}, shifted));
  for (std::size_t i = 0; i < 15; ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-12);
}

TEST(SoftmaxTest, NaNInputIsANumericError) {
  EXPECT_THROW(softmax_rows(Tensor::from_data({1, 2}, {0.0, std::nan("")})), NumericError);
}

TEST(SoftmaxTest, GradientMatchesFiniteDifferences) {
  Rng rng(6);
  std::vector<Tensor> in = {random_tensor({3, 4}, rng)};
  const auto r = check_gradients(in, [&] { return probe_loss(softmax_rows(in[0])); });
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(LayerNormTest, ConstantRowMapsToZero) {
  const Tensor y = layer_norm(Tensor::filled({2, 5}, 3.0), Tensor::filled({5}, 1.0),
                              Tensor::zeros({5}));
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(LayerNormTest, NormalizedRowIsFixed) {
  const Tensor y = layer_norm(Tensor::from_data({1, 2}, {1.0, -1.0}), Tensor::filled({2}, 1.0),
                              Tensor::zeros({2}), 1e-14);
  EXPECT_NEAR(y(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(y(0, 1), -1.0, 1e-12);
}

TEST(LayerNormTest, ZeroMeanUnitVariance) {
  Rng rng(7);
  const Tensor y = layer_norm(random_tensor({4, 6}, rng, false), Tensor::filled({6}, 1.0),
                              Tensor::zeros({6}), 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    double mean = 0.0, var = 0.0;
    for (std::size_t j = 0; j < 6; ++j) mean += y(i, j) / 6.0;
    for (std::size_t j = 0; j < 6; ++j) var += (y(i, j) - mean) * (y(i, j) - mean) / 6.0;
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(var, 1.0, 1e-12);
  }
}

TEST(LayerNormTest, GradientMatchesFiniteDifferences) {
  Rng rng(8);
  std::vector<Tensor> in = {random_tensor({3, 5}, rng), random_tensor({5}, rng),
                            random_tensor({5}, rng)};
  const auto r =
      check_gradients(in, [&] { return probe_loss(layer_norm(in[0], in[1], in[2])); },
                      {"x", "gamma", "beta"});
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(ElementwiseTest, Relu) {
  EXPECT_EQ(values(relu(Tensor::from_data({3}, {-1, 0, 2}))), (std::vector<double>{0, 0, 2}));
}

TEST(ElementwiseTest, AddRejectsMismatchedShapes) {
  EXPECT_THROW(add(Tensor::zeros({2, 3}), Tensor::zeros({3, 2})), DimensionError);
}

TEST(StructuralTest, ConcatLastWidths) {
  const Tensor a = Tensor::zeros({2, 3});
  const Tensor b = Tensor::filled({2, 4}, 1.0);
  const Tensor c = concat_last(std::vector<Tensor>{a, b});
  EXPECT_EQ(c.shape(), (Shape{2, 7}));
  EXPECT_EQ(c(1, 2), 0.0);
  EXPECT_EQ(c(1, 3), 1.0);
}

TEST(StructuralTest, SumRowsOfOneHotsIsHistogram) {
  const Tensor onehots = Tensor::from_data({5, 3}, {1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0});
  EXPECT_EQ(values(sum_rows(onehots)), (std::vector<double>{3, 1, 1}));
}

TEST(StructuralTest, GradientsMatchFiniteDifferences) {
  Rng rng(9);
  std::vector<Tensor> in = {random_tensor({3, 4}, rng), random_tensor({3, 2}, rng),
                            random_tensor({4}, rng), random_tensor({2, 4}, rng)};
  const std::vector<std::uint32_t> idx = {2, 0, 2};
  const auto r = check_gradients(in, [&] {
    Tensor joined = concat_last(std::vector<Tensor>{relu(in[0]), in[1]});
    Tensor stacked = concat_rows(std::vector<Tensor>{add_row(in[0], in[2]), in[3]});
    Tensor picked = gather_rows(transpose(transpose(stacked)), idx);
    return add(add(probe_loss(joined, 1), probe_loss(scale(picked, -1.5), 2)),
               probe_loss(sum_rows(stacked), 3));
  });
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(GroupedAttentionTest, SingleMemberIsIdentityOnValues) {
  Rng rng(10);
  const Tensor q = random_tensor({3, 2}, rng), k = random_tensor({3, 2}, rng);
  const Tensor v = random_tensor({3, 2}, rng);
  const std::vector<std::uint32_t> rows = {1};
  const std::vector<std::vector<std::uint32_t>> members = {{1}};
  const Tensor out = grouped_attention(q, k, v, rows, members, 0.7);
  EXPECT_EQ(out(0, 0), v(1, 0));
  EXPECT_EQ(out(0, 1), v(1, 1));
}

TEST(GroupedAttentionTest, MatchesPairwiseOracleAndGradients) {
  Rng rng(11);
  std::vector<Tensor> in = {random_tensor({5, 3}, rng), random_tensor({5, 3}, rng),
                            random_tensor({5, 3}, rng)};
  const std::vector<std::uint32_t> rows = {0, 3, 4};
  const std::vector<std::vector<std::uint32_t>> members = {{0, 1, 2}, {3, 0}, {4, 4, 1}};
  const double s = 0.6;
  const Tensor out = grouped_attention(in[0], in[1], in[2], rows, members, s);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> w;
    for (auto m : members[i]) {
      double dot = 0.0;
      for (std::size_t c = 0; c < 3; ++c) dot += in[0](rows[i], c) * in[1](m, c);
      w.push_back(std::exp(dot * s));
    }
    const double z = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t c = 0; c < 3; ++c) {
      double expected = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) expected += w[j] / z * in[2](members[i][j], c);
      EXPECT_NEAR(out(i, c), expected, 1e-12);
    }
  }
  const auto r = check_gradients(in, [&] {
    return probe_loss(grouped_attention(in[0], in[1], in[2], rows, members, s));
  }, {"q", "k", "v"});
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(GroupedAttentionTest, ObserverSeesNormalizedRows) {
  Rng rng(12);
  const Tensor q = random_tensor({4, 2}, rng), k = random_tensor({4, 2}, rng);
  const Tensor v = random_tensor({4, 2}, rng);
  const std::vector<std::uint32_t> rows = {0, 1, 2, 3};
  const std::vector<std::vector<std::uint32_t>> members = {{0, 1}, {1, 0, 2}, {2}, {3, 2, 1, 0}};
  std::size_t seen = 0;
  const AttentionObserver observer = [&](std::span<const double> row) {
    ++seen;
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  };
  grouped_attention(q, k, v, rows, members, 1.0, &observer);
  EXPECT_EQ(seen, 4u);
}

TEST(SpmmTest, MatchesDenseProductAndGradient) {
  SparseMatrix a{3, 3, {0, 2, 3, 5}, {0, 2, 1, 0, 2}, {0.5, -1.0, 2.0, 1.5, 0.25}};
  Rng rng(13);
  std::vector<Tensor> in = {random_tensor({3, 2}, rng)};
  const Tensor dense = Tensor::from_data({3, 3}, {0.5, 0, -1.0, 0, 2.0, 0, 1.5, 0, 0.25});
  const Tensor y = spmm(a, in[0]);
  const Tensor expected = matmul(dense, in[0]);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(y.data()[i], expected.data()[i], 1e-15);
  const auto r = check_gradients(in, [&] { return probe_loss(spmm(a, in[0])); });
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(CrossEntropyTest, UniformLogitsGiveLnTwo) {
  const std::vector<std::size_t> labels = {1};
  EXPECT_NEAR(cross_entropy(Tensor::zeros({1, 2}), labels).item(), std::log(2.0), 1e-15);
}

TEST(CrossEntropyTest, ConfidentCorrectPredictionApproachesZero) {
  const std::vector<std::size_t> labels = {0, 1};
  const Tensor logits = Tensor::from_data({2, 2}, {60.0, 0.0, -60.0, 0.0});
  EXPECT_LT(cross_entropy(logits, labels).item(), 1e-20);
}

TEST(CrossEntropyTest, GradientIsSoftmaxMinusOneHotOverBatch) {
  Rng rng(14);
  Tensor logits = random_tensor({3, 4}, rng);
  const std::vector<std::size_t> labels = {2, 0, 3};
  backward(cross_entropy(logits, labels));
  const Tensor p = softmax_rows(logits.detach());
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double expected = (p(b, c) - (labels[b] == c ? 1.0 : 0.0)) / 3.0;
      EXPECT_NEAR(logits.grad()[b * 4 + c], expected, 1e-15);
    }
  }
  std::vector<Tensor> in = {logits};
  const auto r = check_gradients(in, [&] { return cross_entropy(in[0], labels); });
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
}

TEST(CrossEntropyTest, LabelOutOfRangeIsAContractError) {
  const std::vector<std::size_t> labels = {2};
  EXPECT_THROW(cross_entropy(Tensor::zeros({1, 2}), labels), ContractError);
}

TEST(BackwardTest, LinearCaseGivesInputAsGradient) {
  Tensor w = Tensor::from_data({2, 3}, {1, 2, 3, 4, 5, 6});
  w.set_requires_grad(true);
  const Tensor x = Tensor::from_data({3, 1}, {0.5, -1.0, 2.0});
  backward(sum(matmul(w, x)));
  EXPECT_EQ(std::vector<double>(w.grad().begin(), w.grad().end()),
            (std::vector<double>{0.5, -1.0, 2.0, 0.5, -1.0, 2.0}));
}

TEST(BackwardTest, RepeatedCallsAccumulate) {
  Rng rng(15);
  Tensor w = random_tensor({3, 3}, rng);
  const Tensor x = random_tensor({3, 2}, rng, false);
  const Tensor loss = sum(relu(matmul(w, x)));
  backward(loss);
  const std::vector<double> once(w.grad().begin(), w.grad().end());
  backward(loss);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_DOUBLE_EQ(w.grad()[i], 2.0 * once[i]);
}

TEST(BackwardTest, NonScalarLossIsAContractError) {
  Rng rng(16);
  Tensor w = random_tensor({2, 2}, rng);
  EXPECT_THROW(backward(relu(w)), ContractError);
}

TEST(BackwardTest, NoGradGuardStopsRecording) {
  Rng rng(17);
  Tensor w = random_tensor({2, 2}, rng);
  Tensor y;
  {
    NoGradGuard guard;
    EXPECT_FALSE(grad_enabled());
    y = sum(matmul(w, w));
  }
  EXPECT_TRUE(grad_enabled());
  EXPECT_THROW(backward(y), ContractError);
}

TEST(BackwardTest, DeterministicGradients) {
  const auto run = [] {
    Rng rng(18);
    Tensor a = random_tensor({4, 4}, rng);
    Tensor g = random_tensor({4}, rng);
    Tensor b = random_tensor({4}, rng);
    backward(sum(softmax_rows(layer_norm(matmul(a, a), g, b))));
    return std::vector<double>(a.grad().begin(), a.grad().end());
  };
  EXPECT_EQ(run(), run());
}

ParameterStore scalar_store(double value) {
  ParameterStore store;
  Rng rng(0);
  Tensor t = store.add("w", {1}, Init::kZeros, rng);
  t.mutable_data()[0] = value;
  return store;
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  ParameterStore store = scalar_store(0.3);
  auto& p = store.parameters().front().tensor;
  p.mutable_grad()[0] = 1.0;
  AdamState state;
  state.lr = 1e-3;
  adam_step(store.parameters(), state);
  EXPECT_EQ(state.step, 1u);
  EXPECT_NEAR(p.data()[0], 0.3 - 1e-3, 1e-10);
}

TEST(AdamTest, ZeroGradientLeavesParameter) {
  ParameterStore store = scalar_store(0.3);
  auto& p = store.parameters().front().tensor;
  p.mutable_grad()[0] = 0.0;
  AdamState state;
  adam_step(store.parameters(), state);
  EXPECT_EQ(p.data()[0], 0.3);
}

TEST(AdamTest, MissingGradientIsAContractError) {
  ParameterStore store = scalar_store(0.3);
  AdamState state;
  EXPECT_THROW(adam_step(store.parameters(), state), ContractError);
}

TEST(AdamTest, ConvergesOnQuadraticBowl) {
  ParameterStore store = scalar_store(1.0);
  auto& w = store.parameters().front().tensor;
  AdamState state;
  state.lr = 1e-2;
  for (int i = 0; i < 500; ++i) {
    store.zero_grad();
    backward(sum(matmul(reshape(w, {1, 1}), reshape(w, {1, 1}))));
    adam_step(store.parameters(), state);
  }
  EXPECT_LT(std::abs(w.data()[0]), 1e-2);
}

TEST(ParameterTest, InitializationSchemes) {
  ParameterStore store;
  Rng rng(19);
  const Tensor w = store.add("w", {6, 10}, Init::kXavierUniform, rng);
  const Tensor b = store.add("b", {10}, Init::kZeros, rng);
  const Tensor g = store.add("g", {10}, Init::kOnes, rng);
  const double bound = std::sqrt(6.0 / 16.0);
  for (double v : w.data()) EXPECT_LE(std::abs(v), bound);
  for (double v : b.data()) EXPECT_EQ(v, 0.0);
  for (double v : g.data()) EXPECT_EQ(v, 1.0);
  EXPECT_TRUE(w.requires_grad());
  EXPECT_EQ(store.num_scalars(), 80u);
}

TEST(ParameterTest, DuplicateNamesRejected) {
  ParameterStore store;
  Rng rng(20);
  store.add("w", {2}, Init::kZeros, rng);
  EXPECT_THROW(store.add("w", {3}, Init::kZeros, rng), ContractError);
}

TEST(CheckpointTest, RoundTripAndMismatch) {
  testing::TempDir dir("ckpt");
  ParameterStore store;
  Rng rng(21);
  store.add("a", {2, 3}, Init::kXavierUniform, rng);
  store.add("b", {3}, Init::kOnes, rng);
  save_checkpoint(store, dir / "p.bin");

  const auto entries = read_checkpoint(dir / "p.bin");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].name, "a");
  EXPECT_EQ(entries[0].shape, (Shape{2, 3}));

  ParameterStore other;
  Rng rng2(22);
  other.add("a", {2, 3}, Init::kXavierUniform, rng2);
  other.add("b", {3}, Init::kZeros, rng2);
  load_checkpoint(other, dir / "p.bin");
  EXPECT_EQ(other.snapshot(), store.snapshot());

  ParameterStore wrong;
  wrong.add("a", {3, 2}, Init::kZeros, rng2);
  wrong.add("b", {3}, Init::kZeros, rng2);
  EXPECT_THROW(load_checkpoint(wrong, dir / "p.bin"), VersionError);
}

TEST(CheckpointTest, FileIsLittleEndianWithMagic) {
  testing::TempDir dir("ckpt_bytes");
  ParameterStore store = scalar_store(1.0);
  save_checkpoint(store, dir / "p.bin");
  std::ifstream in(dir / "p.bin", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ASSERT_GE(bytes.size(), 16u);
  EXPECT_EQ(bytes.substr(0, 8), std::string("UGFCKPT\0", 8));
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), kCheckpointVersion);
  EXPECT_EQ(bytes.substr(bytes.size() - 8), std::string("\0\0\0\0\0\0\xf0\x3f", 8));
}

TEST(KeyValueTest, ParseSerializeRoundTrip) {
  KeyValueDoc doc;
  doc.set("name", "MUTAG");
  doc.set("lr", 5e-4);
  doc.set("epochs", std::uint64_t{50});
  doc.set("cv", true);
  const KeyValueDoc back = KeyValueDoc::parse(doc.serialize());
  EXPECT_EQ(back.get_string("name"), "MUTAG");
  EXPECT_EQ(back.get_double("lr"), 5e-4);
  EXPECT_EQ(back.get_uint("epochs"), 50u);
  EXPECT_TRUE(back.get_bool("cv"));
  EXPECT_THROW(back.get_uint("name"), ConfigError);
  EXPECT_THROW(back.get_string("missing"), ConfigError);
}

TEST(KeyValueTest, DoublesRoundTripExactly) {
  Rng rng(23);
  for (double v : testing::uniform_values(100, rng, -1e6, 1e6)) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
}  // namespace ugformer
