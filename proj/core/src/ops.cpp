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

#include "ugformer/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "ugformer/error.hpp"

namespace ugformer {

using detail::make_result;
using detail::Node;

namespace {

struct Dims {
  std::size_t rows;
  std::size_t cols;
};

Dims matrix_dims(const Tensor& t, const char* op) {
  const auto& s = t.shape();
  if (s.size() == 2) return {s[0], s[1]};
  if (s.size() == 1) return {1, s[0]};
  throw DimensionError(std::string(op) + ": expected a matrix, got " + shape_string(s));
}

void accumulate(Node* target, std::span<const double> delta) {
  if (!target->requires_grad) return;
  target->ensure_grad();
  for (std::size_t i = 0; i < delta.size(); ++i) target->grad[i] += delta[i];
}

void check_finite(const Tensor& x, const char* op) {
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw NumericError(std::string(op) + ": non-finite input");
  }
}

#ifdef UGFORMER_CHECK_ATTENTION
void check_normalized(std::span<const double> row, const char* op) {
  double s = 0.0;
  for (double w : row) s += w;
  if (std::abs(s - 1.0) > 1e-6) {
    throw NumericError(std::string(op) + ": attention row sums to " + std::to_string(s));
  }
}
#endif

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  const auto [m, k] = matrix_dims(a, "matmul");
  const auto& bs = b.shape();
  if (bs.size() != 2 || bs[0] != k) {
    throw DimensionError("matmul: cannot multiply " + shape_string(a.shape()) + " by " +
                         shape_string(bs));
  }
  const std::size_t n = bs[1];
  std::vector<double> out(m * n, 0.0);
  const double* A = a.data().data();
  const double* B = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = A[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = B + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
  }
  Node* an = &a.node();
  Node* bn = &b.node();
  return make_result({m, n}, std::move(out), {a, b}, [an, bn, m, k, n](Node& self) {
    const double* G = self.grad.data();
    if (an->requires_grad) {
      an->ensure_grad();
      const double* B = bn->data.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += G[i * n + j] * B[p * n + j];
          an->grad[i * k + p] += s;
        }
      }
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      const double* A = an->data.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = A[i * k + p];
          if (aip == 0.0) continue;
          double* grow = bn->grad.data() + p * n;
          for (std::size_t j = 0; j < n; ++j) grow[j] += aip * G[i * n + j];
        }
      }
    }
  });
}

Tensor transpose(const Tensor& a) {
  const auto [m, n] = matrix_dims(a, "transpose");
  std::vector<double> out(m * n);
  const auto in = a.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = in[i * n + j];
  }
  Node* an = &a.node();
  return make_result({n, m}, std::move(out), {a}, [an, m, n](Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) an->grad[i * n + j] += self.grad[j * m + i];
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("add: shapes " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()) + " differ");
  }
  std::vector<double> out(a.numel());
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
  Node* an = &a.node();
  Node* bn = &b.node();
  return make_result(a.shape(), std::move(out), {a, b}, [an, bn](Node& self) {
    accumulate(an, self.grad);
    accumulate(bn, self.grad);
  });
}

Tensor add_row(const Tensor& x, const Tensor& bias) {
  const auto [m, n] = matrix_dims(x, "add_row");
  if (bias.numel() != n || bias.rank() > 1) {
    throw DimensionError("add_row: bias " + shape_string(bias.shape()) + " does not match rows of " +
                         shape_string(x.shape()));
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  const auto b = bias.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] += b[j];
  }
  Node* xn = &x.node();
  Node* bn = &bias.node();
  return make_result(x.shape(), std::move(out), {x, bias}, [xn, bn, m, n](Node& self) {
    accumulate(xn, self.grad);
    if (bn->requires_grad) {
      bn->ensure_grad();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) bn->grad[j] += self.grad[i * n + j];
      }
    }
  });
}

Tensor scale(const Tensor& x, double factor) {
  std::vector<double> out(x.data().begin(), x.data().end());
  for (auto& v : out) v *= factor;
  Node* xn = &x.node();
  return make_result(x.shape(), std::move(out), {x}, [xn, factor](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) xn->grad[i] += factor * self.grad[i];
  });
}

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.data().begin(), x.data().end());
  for (auto& v : out) v = v > 0.0 ? v : 0.0;
  Node* xn = &x.node();
  return make_result(x.shape(), std::move(out), {x}, [xn](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (xn->data[i] > 0.0) xn->grad[i] += self.grad[i];
    }
  });
}

Tensor softmax_rows(const Tensor& x) {
  const auto [m, n] = matrix_dims(x, "softmax_rows");
  check_finite(x, "softmax_rows");
  std::vector<double> out(m * n);
  const auto in = x.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = in.data() + i * n;
    double* dst = out.data() + i * n;
    const double mx = *std::max_element(row, row + n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += (dst[j] = std::exp(row[j] - mx));
    for (std::size_t j = 0; j < n; ++j) dst[j] /= total;
#ifdef UGFORMER_CHECK_ATTENTION
    check_normalized({dst, n}, "softmax_rows");
#endif
  }
  Node* xn = &x.node();
  return make_result(x.shape(), std::move(out), {x}, [xn, m, n](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (std::size_t i = 0; i < m; ++i) {
      const double* y = self.data.data() + i * n;
      const double* g = self.grad.data() + i * n;
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += g[j] * y[j];
      for (std::size_t j = 0; j < n; ++j) xn->grad[i * n + j] += y[j] * (g[j] - dot);
    }
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  const auto [m, d] = matrix_dims(x, "layer_norm");
  if (gamma.numel() != d || beta.numel() != d) {
    throw DimensionError("layer_norm: gamma " + shape_string(gamma.shape()) + " / beta " +
                         shape_string(beta.shape()) + " do not match width " + std::to_string(d));
  }
  auto normalized = std::make_shared<std::vector<double>>(m * d);
  auto inv_std = std::make_shared<std::vector<double>>(m);
  std::vector<double> out(m * d);
  const auto in = x.data();
  const auto g = gamma.data();
  const auto b = beta.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = in.data() + i * d;
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean += row[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= static_cast<double>(d);
    const double r = 1.0 / std::sqrt(var + eps);
    (*inv_std)[i] = r;
    for (std::size_t j = 0; j < d; ++j) {
      const double xh = (row[j] - mean) * r;
      (*normalized)[i * d + j] = xh;
      out[i * d + j] = g[j] * xh + b[j];
    }
  }
  Node* xn = &x.node();
  Node* gn = &gamma.node();
  Node* bn = &beta.node();
  return make_result(x.shape(), std::move(out), {x, gamma, beta},
                     [xn, gn, bn, m, d, normalized, inv_std](Node& self) {
    const double* G = self.grad.data();
    const double* XH = normalized->data();
    if (gn->requires_grad) gn->ensure_grad();
    if (bn->requires_grad) bn->ensure_grad();
    if (xn->requires_grad) xn->ensure_grad();
    std::vector<double> dxh(d);
    for (std::size_t i = 0; i < m; ++i) {
      double mean_dxh = 0.0;
      double mean_dxh_xh = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double gij = G[i * d + j];
        const double xh = XH[i * d + j];
        if (gn->requires_grad) gn->grad[j] += gij * xh;
        if (bn->requires_grad) bn->grad[j] += gij;
        dxh[j] = gij * gn->data[j];
        mean_dxh += dxh[j];
        mean_dxh_xh += dxh[j] * xh;
      }
      if (!xn->requires_grad) continue;
      mean_dxh /= static_cast<double>(d);
      mean_dxh_xh /= static_cast<double>(d);
      const double r = (*inv_std)[i];
      for (std::size_t j = 0; j < d; ++j) {
        xn->grad[i * d + j] += r * (dxh[j] - mean_dxh - XH[i * d + j] * mean_dxh_xh);
      }
    }
  });
}

Tensor concat_last(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_last: no inputs");
  const std::size_t m = matrix_dims(parts.front(), "concat_last").rows;
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    const auto dims = matrix_dims(p, "concat_last");
    if (dims.rows != m) {
      throw DimensionError("concat_last: row counts differ (" + shape_string(parts.front().shape()) +
                           " vs " + shape_string(p.shape()) + ")");
    }
    widths.push_back(dims.cols);
    total += dims.cols;
  }
  std::vector<double> out(m * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto in = parts[k].data();
    for (std::size_t i = 0; i < m; ++i) {
      std::copy_n(in.begin() + i * widths[k], widths[k], out.begin() + i * total + offset);
    }
    offset += widths[k];
  }
  std::vector<Node*> nodes;
  for (const auto& p : parts) nodes.push_back(&p.node());
  Shape shape = parts.front().rank() == 1 ? Shape{total} : Shape{m, total};
  return make_result(std::move(shape), std::move(out), {parts.begin(), parts.end()},
                     [nodes, widths, m, total](Node& self) {
    std::size_t offset = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      Node* n = nodes[k];
      if (n->requires_grad) {
        n->ensure_grad();
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < widths[k]; ++j) {
            n->grad[i * widths[k] + j] += self.grad[i * total + offset + j];
          }
        }
      }
      offset += widths[k];
    }
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_rows: no inputs");
  const std::size_t n = matrix_dims(parts.front(), "concat_rows").cols;
  std::size_t total_rows = 0;
  std::vector<double> out;
  for (const auto& p : parts) {
    const auto dims = matrix_dims(p, "concat_rows");
    if (dims.cols != n) {
      throw DimensionError("concat_rows: column counts differ (" +
                           shape_string(parts.front().shape()) + " vs " + shape_string(p.shape()) + ")");
    }
    total_rows += dims.rows;
    out.insert(out.end(), p.data().begin(), p.data().end());
  }
  std::vector<Node*> nodes;
  for (const auto& p : parts) nodes.push_back(&p.node());
  return make_result({total_rows, n}, std::move(out), {parts.begin(), parts.end()},
                     [nodes](Node& self) {
    std::size_t offset = 0;
    for (Node* node : nodes) {
      const std::size_t len = node->data.size();
      accumulate(node, std::span<const double>(self.grad).subspan(offset, len));
      offset += len;
    }
  });
}

Tensor sum_rows(const Tensor& x) {
  const auto [m, n] = matrix_dims(x, "sum_rows");
  std::vector<double> out(n, 0.0);
  const auto in = x.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j] += in[i * n + j];
  }
  Node* xn = &x.node();
  return make_result({n}, std::move(out), {x}, [xn, m, n](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) xn->grad[i * n + j] += self.grad[j];
    }
  });
}

Tensor sum(const Tensor& x) {
  const auto in = x.data();
  const double total = std::accumulate(in.begin(), in.end(), 0.0);
  Node* xn = &x.node();
  return make_result({}, {total}, {x}, [xn](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (auto& g : xn->grad) g += self.grad[0];
  });
}

Tensor gather_rows(const Tensor& x, std::span<const std::uint32_t> indices) {
  const auto [m, n] = matrix_dims(x, "gather_rows");
  std::vector<double> out(indices.size() * n);
  const auto in = x.data();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= m) {
      throw ContractError("gather_rows: index " + std::to_string(indices[i]) + " out of range for " +
                          std::to_string(m) + " rows");
    }
    std::copy_n(in.begin() + indices[i] * n, n, out.begin() + i * n);
  }
  Node* xn = &x.node();
  std::vector<std::uint32_t> idx(indices.begin(), indices.end());
  return make_result({indices.size(), n}, std::move(out), {x}, [xn, idx = std::move(idx), n](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) xn->grad[idx[i] * n + j] += self.grad[i * n + j];
    }
  });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_numel(shape) != x.numel()) {
    throw DimensionError("reshape: cannot view " + shape_string(x.shape()) + " as " +
                         shape_string(shape));
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  Node* xn = &x.node();
  return make_result(std::move(shape), std::move(out), {x},
                     [xn](Node& self) { accumulate(xn, self.grad); });
}

Tensor grouped_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                         std::span<const std::uint32_t> query_rows,
                         std::span<const std::vector<std::uint32_t>> member_lists,
                         double score_scale, const AttentionObserver* observer) {
  const auto [nq, d] = matrix_dims(q, "grouped_attention");
  const auto kd = matrix_dims(k, "grouped_attention");
  const auto vd = matrix_dims(v, "grouped_attention");
  if (kd.cols != d || kd.rows != vd.rows) {
    throw DimensionError("grouped_attention: q " + shape_string(q.shape()) + ", k " +
                         shape_string(k.shape()) + ", v " + shape_string(v.shape()) + " disagree");
  }
  if (query_rows.size() != member_lists.size()) {
    throw ContractError("grouped_attention: one member list per query row required");
  }
  const std::size_t dv = vd.cols;
  const std::size_t groups = query_rows.size();

  // Attention weights of every group, flattened; offsets[i] marks group i.
  auto weights = std::make_shared<std::vector<double>>();
  auto offsets = std::make_shared<std::vector<std::size_t>>(groups + 1, 0);
  for (std::size_t i = 0; i < groups; ++i) {
    if (member_lists[i].empty()) throw ContractError("grouped_attention: empty member list");
    if (query_rows[i] >= nq) throw ContractError("grouped_attention: query row out of range");
    for (auto m : member_lists[i]) {
      if (m >= kd.rows) {
        throw ContractError("grouped_attention: member index " + std::to_string(m) +
                            " out of range for " + std::to_string(kd.rows) + " rows");
      }
    }
    (*offsets)[i + 1] = (*offsets)[i] + member_lists[i].size();
  }
  weights->resize(offsets->back());

  const double* Q = q.data().data();
  const double* K = k.data().data();
  const double* V = v.data().data();
  std::vector<double> out(groups * dv, 0.0);
  for (std::size_t i = 0; i < groups; ++i) {
    const auto& members = member_lists[i];
    double* w = weights->data() + (*offsets)[i];
    const double* qi = Q + query_rows[i] * d;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < members.size(); ++j) {
      const double* kj = K + members[j] * d;
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += qi[c] * kj[c];
      w[j] = s * score_scale;
      mx = std::max(mx, w[j]);
    }
    if (!std::isfinite(mx)) throw NumericError("grouped_attention: non-finite score");
    double total = 0.0;
    for (std::size_t j = 0; j < members.size(); ++j) total += (w[j] = std::exp(w[j] - mx));
    for (std::size_t j = 0; j < members.size(); ++j) w[j] /= total;
#ifdef UGFORMER_CHECK_ATTENTION
    check_normalized({w, members.size()}, "grouped_attention");
#endif
    if (observer && *observer) (*observer)(std::span<const double>(w, members.size()));
    double* o = out.data() + i * dv;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const double* vj = V + members[j] * dv;
      for (std::size_t c = 0; c < dv; ++c) o[c] += w[j] * vj[c];
    }
  }

  std::vector<std::uint32_t> queries(query_rows.begin(), query_rows.end());
  std::vector<std::vector<std::uint32_t>> lists(member_lists.begin(), member_lists.end());
  Node* qn = &q.node();
  Node* kn = &k.node();
  Node* vn = &v.node();
  return make_result({groups, dv}, std::move(out), {q, k, v},
                     [qn, kn, vn, d, dv, score_scale, weights, offsets, queries = std::move(queries),
                      lists = std::move(lists)](Node& self) {
    for (Node* n : {qn, kn, vn}) {
      if (n->requires_grad) n->ensure_grad();
    }
    std::vector<double> dscore;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      const auto& members = lists[i];
      const double* w = weights->data() + (*offsets)[i];
      const double* g = self.grad.data() + i * dv;
      dscore.assign(members.size(), 0.0);
      double weighted = 0.0;
      for (std::size_t j = 0; j < members.size(); ++j) {
        const double* vj = vn->data.data() + members[j] * dv;
        double dw = 0.0;
        for (std::size_t c = 0; c < dv; ++c) dw += g[c] * vj[c];
        dscore[j] = dw;
        weighted += w[j] * dw;
        if (vn->requires_grad) {
          double* gv = vn->grad.data() + members[j] * dv;
          for (std::size_t c = 0; c < dv; ++c) gv[c] += w[j] * g[c];
        }
      }
      const double* qi = qn->data.data() + queries[i] * d;
      for (std::size_t j = 0; j < members.size(); ++j) {
        const double ds = w[j] * (dscore[j] - weighted) * score_scale;
        if (ds == 0.0) continue;
        if (qn->requires_grad) {
          const double* kj = kn->data.data() + members[j] * d;
          double* gq = qn->grad.data() + queries[i] * d;
          for (std::size_t c = 0; c < d; ++c) gq[c] += ds * kj[c];
        }
        if (kn->requires_grad) {
          double* gk = kn->grad.data() + members[j] * d;
          for (std::size_t c = 0; c < d; ++c) gk[c] += ds * qi[c];
        }
      }
    }
  });
}

Tensor spmm(const SparseMatrix& a, const Tensor& x) {
  const auto [m, n] = matrix_dims(x, "spmm");
  if (a.cols != m || a.row_ptr.size() != a.rows + 1) {
    throw DimensionError("spmm: sparse [" + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         "] cannot multiply " + shape_string(x.shape()));
  }
  std::vector<double> out(a.rows * n, 0.0);
  const auto in = x.data();
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t e = a.row_ptr[r]; e < a.row_ptr[r + 1]; ++e) {
      const double w = a.values[e];
      const double* src = in.data() + a.col_idx[e] * n;
      for (std::size_t j = 0; j < n; ++j) out[r * n + j] += w * src[j];
    }
  }
  Node* xn = &x.node();
  return make_result({a.rows, n}, std::move(out), {x}, [xn, a, n](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    for (std::size_t r = 0; r < a.rows; ++r) {
      for (std::size_t e = a.row_ptr[r]; e < a.row_ptr[r + 1]; ++e) {
        const double w = a.values[e];
        double* dst = xn->grad.data() + a.col_idx[e] * n;
        for (std::size_t j = 0; j < n; ++j) dst[j] += w * self.grad[r * n + j];
      }
    }
  });
}

Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> labels) {
  const auto [b, c] = matrix_dims(logits, "cross_entropy");
  if (labels.size() != b) {
    throw ContractError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(b) + " rows");
  }
  check_finite(logits, "cross_entropy");
  auto probs = std::make_shared<std::vector<double>>(b * c);
  const auto in = logits.data();
  double loss = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    if (labels[i] >= c) {
      throw ContractError("cross_entropy: label " + std::to_string(labels[i]) + " outside [0, " +
                          std::to_string(c) + ")");
    }
    const double* row = in.data() + i * c;
    const double mx = *std::max_element(row, row + c);
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) total += std::exp(row[j] - mx);
    const double log_z = mx + std::log(total);
    for (std::size_t j = 0; j < c; ++j) (*probs)[i * c + j] = std::exp(row[j] - log_z);
    loss += log_z - row[labels[i]];
  }
  loss /= static_cast<double>(b);
  std::vector<std::size_t> lbl(labels.begin(), labels.end());
  Node* ln = &logits.node();
  return make_result({}, {loss}, {logits}, [ln, probs, lbl = std::move(lbl), b, c](Node& self) {
    if (!ln->requires_grad) return;
    ln->ensure_grad();
    const double g = self.grad[0] / static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        const double target = j == lbl[i] ? 1.0 : 0.0;
        ln->grad[i * c + j] += g * ((*probs)[i * c + j] - target);
      }
    }
  });
}

}  // namespace ugformer
