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

#include "fwattn/window.hpp"

#include <algorithm>

#include "fwattn/error.hpp"

namespace fwattn {

namespace {

Shape image_shape(const WindowConfig& cfg) {
  return Shape{static_cast<Extent>(cfg.height), static_cast<Extent>(cfg.width),
               static_cast<Extent>(cfg.channels)};
}

Shape windows_shape(const WindowConfig& cfg) {
  return Shape{static_cast<Extent>(cfg.num_windows()), static_cast<Extent>(cfg.seq_len()),
               static_cast<Extent>(cfg.channels)};
}

// Visits every (window-major offset, image offset) pair of C-long pixel runs.
template <typename Fn>
void for_each_pixel(const WindowConfig& cfg, Fn&& fn) {
  const std::size_t k = cfg.window, C = cfg.channels;
  const std::size_t win_cols = cfg.width / k;
  const std::size_t L = cfg.seq_len();
  for (std::size_t wr = 0; wr < cfg.height / k; ++wr) {
    for (std::size_t wc = 0; wc < win_cols; ++wc) {
      const std::size_t n = wr * win_cols + wc;
      for (std::size_t l = 0; l < L; ++l) {
        const std::size_t row = wr * k + l / k;
        const std::size_t col = wc * k + l % k;
        fn((n * L + l) * C, (row * cfg.width + col) * C);
      }
    }
  }
}

}  // namespace

void WindowConfig::validate() const {
  if (height == 0 || width == 0 || channels == 0 || window == 0) {
    throw InvalidShapeError("window config extents must be >= 1: " + to_string());
  }
  if (height % window != 0 || width % window != 0) {
    throw PartitionError("window size " + std::to_string(window) +
                         " does not divide image " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
}

std::string WindowConfig::to_string() const {
  return "H=" + std::to_string(height) + " W=" + std::to_string(width) +
         " C=" + std::to_string(channels) + " k=" + std::to_string(window);
}

DenseTensor window_partition(const DenseTensor& x, const WindowConfig& cfg) {
  cfg.validate();
  if (x.shape() != image_shape(cfg)) {
    throw ShapeError("window_partition: input " + x.shape().to_string() +
                     " does not match " + cfg.to_string());
  }
  DenseTensor out = zeros(windows_shape(cfg));
  const auto src = x.data();
  auto dst = out.data();
  const std::size_t C = cfg.channels;
  for_each_pixel(cfg, [&](std::size_t win_off, std::size_t img_off) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(img_off), C,
                dst.begin() + static_cast<std::ptrdiff_t>(win_off));
  });
  return out;
}

DenseTensor window_reverse(const DenseTensor& y, const WindowConfig& cfg) {
  cfg.validate();
  if (y.shape() != windows_shape(cfg)) {
    throw ShapeError("window_reverse: input " + y.shape().to_string() + " inconsistent with " +
                     cfg.to_string() + ", expected " + windows_shape(cfg).to_string());
  }
  DenseTensor out = zeros(image_shape(cfg));
  const auto src = y.data();
  auto dst = out.data();
  const std::size_t C = cfg.channels;
  for_each_pixel(cfg, [&](std::size_t win_off, std::size_t img_off) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(win_off), C,
                dst.begin() + static_cast<std::ptrdiff_t>(img_off));
  });
  return out;
}

}  // namespace fwattn
