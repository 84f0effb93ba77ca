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

#pragma once

#include <functional>

#include "fwattn/tensor.hpp"

namespace fwattn {

/// Scores are `scale * Q K^T`. The default 1.0 is plain dot-product
/// attention; pass 1/sqrt(C) for the customary scaled variant.
struct AttnParams {
  double scale = 1.0;

  void validate() const;
};

/// On-chip values a materializing implementation keeps between passes.
struct AttnIntermediates {
  DenseTensor scores;   // S, L x L
  DenseTensor weights;  // P, L x L
};

struct NaiveForwardResult {
  DenseTensor output;  // O, L x C
  AttnIntermediates cache;
};

struct AttnGradients {
  DenseTensor dq;
  DenseTensor dk;
  DenseTensor dv;
};

/// Row-wise softmax with row-max subtraction. Throws NumericError on
/// non-finite input.
DenseTensor softmax_rows(const DenseTensor& scores);

/// In-place variant over a row-major rows x cols buffer; shared with the
/// tiled kernels.
void softmax_rows_inplace(std::span<double> buf, std::size_t rows, std::size_t cols);

/// dS_ij = P_ij (dP_ij - sum_l P_il dP_il).
DenseTensor softmax_backward(const DenseTensor& weights, const DenseTensor& d_weights);

/// Straightforward attention: S = scale Q K^T, P = softmax(S), O = P V.
NaiveForwardResult naive_forward(const DenseTensor& q, const DenseTensor& k,
                                 const DenseTensor& v, const AttnParams& params = {});

AttnGradients naive_backward(const DenseTensor& q, const DenseTensor& k,
                             const DenseTensor& v, const AttnIntermediates& cache,
                             const DenseTensor& d_out, const AttnParams& params = {});

using ScalarFn = std::function<double(const DenseTensor&)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every element.
/// Throws RangeError for h <= 0 and NumericError if f is non-finite.
DenseTensor finite_diff_grad(const ScalarFn& f, const DenseTensor& x, double h = 1e-5);

}  // namespace fwattn
