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
#include <optional>

namespace fwattn {

/// Feature-dimension tiling: Q, K, V are split column-wise into `chunks`
/// blocks of ceil(C / chunks) features, the last one possibly narrower.
struct TileConfig {
  std::size_t chunks = 1;
  double scale = 1.0;
  /// Bytes per element used for scratchpad and traffic accounting. Values are
  /// always computed in double; 4 reproduces fp32 footprints.
  std::size_t elem_bytes = 8;

  /// Throws RangeError unless 1 <= chunks <= C, every chunk is non-empty,
  /// scale is finite and positive and elem_bytes > 0.
  void validate(std::size_t channels) const;

  std::size_t chunk_width(std::size_t channels) const {
    return (channels + chunks - 1) / chunks;
  }
  std::size_t chunk_begin(std::size_t channels, std::size_t i) const {
    return i * chunk_width(channels);
  }
  /// Width of chunk i; only the last chunk can be ragged.
  std::size_t chunk_size(std::size_t channels, std::size_t i) const;
};

/// The benchmark rule chunks = C / 16, defined only when 16 divides C.
std::optional<std::size_t> auto_chunks(std::size_t channels);

/// Peak scratchpad bytes of the tiled forward pass: (L^2 + 2 L w) * elem_bytes
/// with w = ceil(C / chunks). S lives alongside one Q/K chunk pair.
std::uint64_t peak_sram_forward(std::size_t seq_len, std::size_t channels,
                                const TileConfig& cfg);

/// Peak scratchpad bytes of the tiled backward pass: (2 L^2 + 2 L w) * elem_bytes.
std::uint64_t peak_sram_backward(std::size_t seq_len, std::size_t channels,
                                 const TileConfig& cfg);

}  // namespace fwattn
