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

#include "fwattn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fwattn/error.hpp"

namespace fwattn {

namespace {

void validate_extents(const std::vector<Extent>& extents) {
  if (extents.empty() || extents.size() > Shape::kMaxRank) {
    throw InvalidShapeError("shape must have 1 to 4 axes, got " +
                            std::to_string(extents.size()));
  }
  for (Extent e : extents) {
    if (e < 1) {
      throw InvalidShapeError("shape extents must be >= 1, got " + std::to_string(e));
    }
  }
}

void require_rank(const DenseTensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) +
                     ", got shape " + t.shape().to_string());
  }
}

}  // namespace

Shape::Shape(std::initializer_list<Extent> extents) : Shape(std::vector<Extent>(extents)) {}

Shape::Shape(std::vector<Extent> extents) : extents_(std::move(extents)) {
  validate_extents(extents_);
}

std::size_t Shape::num_elements() const noexcept {
  if (extents_.empty()) return 0;
  std::size_t n = 1;
  for (Extent e : extents_) n *= static_cast<std::size_t>(e);
  return n;
}

std::string Shape::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(extents_[i]);
  }
  return s + "]";
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.rank() == 0) throw InvalidShapeError("tensor requires a non-empty shape");
  if (data_.size() != shape_.num_elements()) {
    throw ShapeError("tensor data has " + std::to_string(data_.size()) +
                     " elements but shape " + shape_.to_string() + " needs " +
                     std::to_string(shape_.num_elements()));
  }
}

DenseTensor DenseTensor::reshaped(Shape shape) const& {
  return DenseTensor(std::move(shape), data_);
}

DenseTensor DenseTensor::reshaped(Shape shape) && {
  return DenseTensor(std::move(shape), std::move(data_));
}

DenseTensor zeros(const Shape& shape) {
  if (shape.rank() == 0) throw InvalidShapeError("zeros: empty shape");
  return DenseTensor(shape, std::vector<double>(shape.num_elements(), 0.0));
}

DenseTensor identity(std::size_t n) {
  DenseTensor t = zeros(Shape{static_cast<Extent>(n), static_cast<Extent>(n)});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

DenseTensor fill_uniform(Rng& rng, const Shape& shape, double lo, double hi) {
  if (!(lo < hi)) {
    throw RangeError("fill_uniform: require lo < hi, got [" + std::to_string(lo) +
                     ", " + std::to_string(hi) + ")");
  }
  DenseTensor t = zeros(shape);
  for (double& x : t.data()) x = rng.uniform(lo, hi);
  return t;
}

DenseTensor from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(n * m);
  for (const auto& row : rows) {
    if (row.size() != m) throw ShapeError("from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseTensor(Shape{static_cast<Extent>(n), static_cast<Extent>(m)}, std::move(data));
}

DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  if (b.rows() != inner) {
    throw ShapeError("matmul: inner extents differ, " + a.shape().to_string() + " * " +
                     b.shape().to_string());
  }
  DenseTensor c = zeros(Shape{static_cast<Extent>(n), static_cast<Extent>(m)});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = a.at(i, k);
      for (std::size_t j = 0; j < m; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

DenseTensor transpose(const DenseTensor& a) {
  require_rank(a, 2, "transpose");
  DenseTensor t = zeros(Shape{static_cast<Extent>(a.cols()), static_cast<Extent>(a.rows())});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

DenseTensor scaled(const DenseTensor& a, double factor) {
  DenseTensor t = a;
  for (double& x : t.data()) x *= factor;
  return t;
}

void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape().to_string() +
                     " vs " + b.shape().to_string());
  }
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    // NaN must not compare as "no difference".
    if (!(d <= m)) m = d;
  }
  return m;
}

double inner_product(const DenseTensor& a, const DenseTensor& b) {
  require_same_shape(a, b, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum(const DenseTensor& a) {
  return std::accumulate(a.data().begin(), a.data().end(), 0.0);
}

DenseTensor slice_matrix(const DenseTensor& t, std::size_t b, std::size_t h) {
  require_rank(t, 4, "slice_matrix");
  const std::size_t heads = t.shape()[1], L = t.shape()[2], C = t.shape()[3];
  const std::size_t offset = (b * heads + h) * L * C;
  std::vector<double> data(t.data().begin() + static_cast<std::ptrdiff_t>(offset),
                           t.data().begin() + static_cast<std::ptrdiff_t>(offset + L * C));
  return DenseTensor(Shape{static_cast<Extent>(L), static_cast<Extent>(C)}, std::move(data));
}

void assign_matrix(DenseTensor& t, std::size_t b, std::size_t h, const DenseTensor& m) {
  require_rank(t, 4, "assign_matrix");
  const std::size_t heads = t.shape()[1], L = t.shape()[2], C = t.shape()[3];
  if (m.rank() != 2 || m.rows() != L || m.cols() != C) {
    throw ShapeError("assign_matrix: slice shape " + m.shape().to_string() +
                     " does not fit " + t.shape().to_string());
  }
  std::copy(m.data().begin(), m.data().end(),
            t.data().begin() + static_cast<std::ptrdiff_t>((b * heads + h) * L * C));
}

}  // namespace fwattn
