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

#include "fwattn/tile_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwattn/error.hpp"

namespace fwattn {

void TileConfig::validate(std::size_t channels) const {
  if (channels == 0) throw InvalidShapeError("tile config: channel count must be >= 1");
  if (chunks < 1 || chunks > channels) {
    throw RangeError("tile config: chunk count " + std::to_string(chunks) +
                     " outside [1, " + std::to_string(channels) + "]");
  }
  if (chunk_width(channels) * (chunks - 1) >= channels) {
    throw RangeError("tile config: " + std::to_string(chunks) + " chunks of width " +
                     std::to_string(chunk_width(channels)) + " leave an empty chunk for C=" +
                     std::to_string(channels));
  }
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw RangeError("tile config: scale must be finite and > 0");
  }
  if (elem_bytes == 0) throw RangeError("tile config: elem_bytes must be > 0");
}

std::size_t TileConfig::chunk_size(std::size_t channels, std::size_t i) const {
  const std::size_t begin = chunk_begin(channels, i);
  return std::min(chunk_width(channels), channels - begin);
}

std::optional<std::size_t> auto_chunks(std::size_t channels) {
  if (channels < 16 || channels % 16 != 0) return std::nullopt;
  return channels / 16;
}

std::uint64_t peak_sram_forward(std::size_t seq_len, std::size_t channels,
                                const TileConfig& cfg) {
  const std::uint64_t L = seq_len, w = cfg.chunk_width(channels);
  return (L * L + 2 * L * w) * cfg.elem_bytes;
}

std::uint64_t peak_sram_backward(std::size_t seq_len, std::size_t channels,
                                 const TileConfig& cfg) {
  const std::uint64_t L = seq_len, w = cfg.chunk_width(channels);
  return (2 * L * L + 2 * L * w) * cfg.elem_bytes;
}

}  // namespace fwattn
