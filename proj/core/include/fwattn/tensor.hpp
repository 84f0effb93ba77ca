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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fwattn/rng.hpp"

namespace fwattn {

using Extent = std::int64_t;

/// Extents of a dense tensor, outermost first. 1 to 4 axes, all >= 1.
class Shape {
 public:
  static constexpr std::size_t kMaxRank = 4;

  Shape() = default;
  Shape(std::initializer_list<Extent> extents);
  explicit Shape(std::vector<Extent> extents);

  std::size_t rank() const noexcept { return extents_.size(); }
  std::size_t operator[](std::size_t axis) const {
    return static_cast<std::size_t>(extents_.at(axis));
  }
  std::size_t num_elements() const noexcept;
  const std::vector<Extent>& extents() const noexcept { return extents_; }

  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Extent> extents_;
};

/// Row-major array of doubles with an explicit shape.
class DenseTensor {
 public:
  DenseTensor() = default;
  /// Throws ShapeError if data.size() != shape.num_elements().
  DenseTensor(Shape shape, std::vector<double> data);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.rank(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t rows() const { return shape_[0]; }
  std::size_t cols() const { return shape_[1]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  // 2-D access; callers guarantee rank() == 2.
  double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }

  /// Same data viewed under another shape with the same element count.
  DenseTensor reshaped(Shape shape) const&;
  DenseTensor reshaped(Shape shape) &&;

 private:
  Shape shape_;
  std::vector<double> data_;
};

DenseTensor zeros(const Shape& shape);

DenseTensor identity(std::size_t n);

/// Elements i.i.d. uniform on [lo, hi), drawn from `rng` in row-major order.
DenseTensor fill_uniform(Rng& rng, const Shape& shape, double lo, double hi);

DenseTensor from_rows(std::initializer_list<std::initializer_list<double>> rows);

/// c = a * b for 2-D a (L x M), b (M x N).
DenseTensor matmul(const DenseTensor& a, const DenseTensor& b);

DenseTensor transpose(const DenseTensor& a);

DenseTensor scaled(const DenseTensor& a, double factor);

/// max_i |a_i - b_i|. Shapes must match.
double max_abs_diff(const DenseTensor& a, const DenseTensor& b);

/// Frobenius inner product sum_i a_i * b_i.
double inner_product(const DenseTensor& a, const DenseTensor& b);

double sum(const DenseTensor& a);

/// Copies the 2-D slice [.., index, :, :] of a rank-4 tensor B x H x L x C.
DenseTensor slice_matrix(const DenseTensor& t, std::size_t b, std::size_t h);

/// Writes a 2-D L x C matrix into [.., b, h, :, :] of a rank-4 tensor.
void assign_matrix(DenseTensor& t, std::size_t b, std::size_t h, const DenseTensor& m);

void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op);

}  // namespace fwattn
