// Copyright 2026 The fwattn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fwattn/reference_attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwattn/error.hpp"

namespace fwattn {

namespace {

void require_square(const DenseTensor& t, const char* op) {
  if (t.rank() != 2 || t.rows() != t.cols()) {
    throw ShapeError(std::string(op) + ": expected a square matrix, got " +
                     t.shape().to_string());
  }
}

void require_qkv(const DenseTensor& q, const DenseTensor& k, const DenseTensor& v,
                 const char* op) {
  if (q.rank() != 2) {
    throw ShapeError(std::string(op) + ": Q must be L x C, got " + q.shape().to_string());
  }
  require_same_shape(q, k, op);
  require_same_shape(q, v, op);
}

}  // namespace

void AttnParams::validate() const {
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw RangeError("attention scale must be finite and > 0, got " + std::to_string(scale));
  }
}

void softmax_rows_inplace(std::span<double> buf, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    auto row = buf.subspan(i * cols, cols);
    double m = row[0];
    for (double x : row) {
      if (!std::isfinite(x)) {
        throw NumericError("softmax: non-finite score " + std::to_string(x) + " in row " +
                           std::to_string(i));
      }
      m = std::max(m, x);
    }
    double denom = 0.0;
    for (double& x : row) {
      x = std::exp(x - m);
      denom += x;
    }
    for (double& x : row) x /= denom;
  }
}

DenseTensor softmax_rows(const DenseTensor& scores) {
  if (scores.rank() != 2) {
    throw ShapeError("softmax_rows: expected a matrix, got " + scores.shape().to_string());
  }
  DenseTensor p = scores;
  softmax_rows_inplace(p.data(), p.rows(), p.cols());
  return p;
}

DenseTensor softmax_backward(const DenseTensor& weights, const DenseTensor& d_weights) {
  require_square(weights, "softmax_backward");
  require_same_shape(weights, d_weights, "softmax_backward");
  const std::size_t L = weights.rows();
  DenseTensor ds = zeros(weights.shape());
  for (std::size_t i = 0; i < L; ++i) {
    double dot = 0.0;
    for (std::size_t l = 0; l < L; ++l) dot += weights.at(i, l) * d_weights.at(i, l);
    for (std::size_t j = 0; j < L; ++j) {
      ds.at(i, j) = weights.at(i, j) * (d_weights.at(i, j) - dot);
    }
  }
  return ds;
}

NaiveForwardResult naive_forward(const DenseTensor& q, const DenseTensor& k,
                                 const DenseTensor& v, const AttnParams& params) {
  params.validate();
  require_qkv(q, k, v, "naive_forward");
  DenseTensor s = matmul(q, transpose(k));
  if (params.scale != 1.0) s = scaled(s, params.scale);
  DenseTensor p = softmax_rows(s);
  DenseTensor o = matmul(p, v);
  return {std::move(o), {std::move(s), std::move(p)}};
}

AttnGradients naive_backward(const DenseTensor& q, const DenseTensor& k, const DenseTensor& v,
                             const AttnIntermediates& cache, const DenseTensor& d_out,
                             const AttnParams& params) {
  params.validate();
  require_qkv(q, k, v, "naive_backward");
  require_same_shape(q, d_out, "naive_backward");
  const Shape ll{static_cast<Extent>(q.rows()), static_cast<Extent>(q.rows())};
  if (cache.weights.shape() != ll) {
    throw ShapeError("naive_backward: cached P is " + cache.weights.shape().to_string() +
                     ", expected " + ll.to_string());
  }
  const DenseTensor& p = cache.weights;
  DenseTensor dv = matmul(transpose(p), d_out);
  DenseTensor dp = matmul(d_out, transpose(v));
  DenseTensor ds = softmax_backward(p, dp);
  DenseTensor dq = matmul(ds, k);
  DenseTensor dk = matmul(transpose(ds), q);
  if (params.scale != 1.0) {
    dq = scaled(dq, params.scale);
    dk = scaled(dk, params.scale);
  }
  return {std::move(dq), std::move(dk), std::move(dv)};
}

DenseTensor finite_diff_grad(const ScalarFn& f, const DenseTensor& x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw RangeError("finite_diff_grad: step must be finite and > 0, got " + std::to_string(h));
  }
  DenseTensor grad = zeros(x.shape());
  DenseTensor probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double up = f(probe);
    probe[i] = orig - h;
    const double down = f(probe);
    probe[i] = orig;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_diff_grad: non-finite function value at element " +
                         std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace fwattn
