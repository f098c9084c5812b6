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

#ifndef UGFORMER_OPS_HPP_
#define UGFORMER_OPS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ugformer/tensor.hpp"

namespace ugformer {

// Called once per normalized attention row with that row's weights.
using AttentionObserver = std::function<void(std::span<const double> weights)>;

// Matrices are 2-D row-major tensors; a 1-D tensor of length n is accepted
// wherever a [1 x n] row is expected unless noted otherwise.

// [m x k] . [k x n] -> [m x n]
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
// Elementwise sum of two tensors of identical shape.
Tensor add(const Tensor& a, const Tensor& b);
// Adds a length-n vector to every row of an [m x n] matrix.
Tensor add_row(const Tensor& x, const Tensor& bias);
Tensor scale(const Tensor& x, double factor);
Tensor relu(const Tensor& x);
// Row-wise softmax with row-max subtraction. Throws NumericError on
// non-finite input.
Tensor softmax_rows(const Tensor& x);
// Normalizes each row to zero mean and unit population variance, then
// applies gamma * x + beta.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-5);
// Concatenates along the last dimension; all inputs share the row count.
Tensor concat_last(std::span<const Tensor> parts);
// Stacks inputs along the first dimension; all inputs share the column count.
Tensor concat_rows(std::span<const Tensor> parts);
// Column-wise sum of an [m x n] matrix -> [n].
Tensor sum_rows(const Tensor& x);
// Sum of every element -> scalar.
Tensor sum(const Tensor& x);
// Rows x[indices[i]] -> [indices.size() x n]. Repeated indices accumulate
// their gradients.
Tensor gather_rows(const Tensor& x, std::span<const std::uint32_t> indices);
Tensor reshape(const Tensor& x, Shape shape);

// Scaled dot-product attention restricted to index groups. Output row i is
//   sum_j softmax_j(<q[query_rows[i]], k[m_ij]> * score_scale) v[m_ij]
// with m_i = member_lists[i]. Every member list must be non-empty.
Tensor grouped_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                         std::span<const std::uint32_t> query_rows,
                         std::span<const std::vector<std::uint32_t>> member_lists,
                         double score_scale, const AttentionObserver* observer = nullptr);

// Constant sparse matrix in compressed-row form.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;  // rows + 1 offsets
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;
};

// sparse [r x c] . x [c x n] -> [r x n]; differentiable in x only.
Tensor spmm(const SparseMatrix& a, const Tensor& x);

// Mean over the batch of -log softmax(logits[b])[labels[b]], computed with a
// fused log-sum-exp. logits is [B x C]; a 1-D logits vector is one row.
Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> labels);

}  // namespace ugformer

#endif  // UGFORMER_OPS_HPP_
