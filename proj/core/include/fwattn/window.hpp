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
#include <string>

#include "fwattn/tensor.hpp"

namespace fwattn {

/// Image geometry for non-overlapping window attention: an H x W x C image
/// cut into N = H*W/k^2 windows of L = k^2 pixels each.
struct WindowConfig {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::size_t window = 0;

  /// Throws InvalidShapeError on zero extents, PartitionError if the window
  /// side does not divide both image sides.
  void validate() const;

  std::size_t num_windows() const { return (height / window) * (width / window); }
  std::size_t seq_len() const { return window * window; }

  std::string to_string() const;
};

/// H x W x C -> N x L x C. Windows are enumerated row-major over
/// (window row, window column); pixels inside a window row-major as well:
///   out[n][l][c] = x[wr*k + l/k][wc*k + l%k][c],  n = wr*(W/k) + wc.
DenseTensor window_partition(const DenseTensor& x, const WindowConfig& cfg);

/// Exact inverse of window_partition.
DenseTensor window_reverse(const DenseTensor& y, const WindowConfig& cfg);

}  // namespace fwattn
