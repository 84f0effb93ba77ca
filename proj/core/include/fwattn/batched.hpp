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
#include <vector>

#include "fwattn/flash_attention.hpp"

namespace fwattn {

struct BatchOptions {
  /// Scratchpad size of each worker's private arena.
  std::uint64_t capacity_bytes = ScratchpadArena::kDefaultCapacityBytes;
  std::size_t workers = 1;
};

struct BatchedForwardResult {
  DenseTensor output;                 // B x heads x L x C
  std::vector<FlashContext> contexts;  // index b * heads + h
  TrafficReport report;               // counts summed, peak is per worker
};

struct BatchedBackwardResult {
  AttnGradients grads;  // each B x heads x L x C
  TrafficReport report;
};

/// Runs flash_forward on every (batch, head) slice of B x heads x L x C
/// operands. Slices are split across `workers` threads, each with its own
/// arena; results do not depend on the worker count. Errors are rethrown
/// with the (b, head) of the first failing slice prepended.
BatchedForwardResult batched_flash_forward(const DenseTensor& q, const DenseTensor& k,
                                           const DenseTensor& v, const TileConfig& cfg,
                                           const BatchOptions& opts = {});

BatchedBackwardResult batched_flash_backward(const std::vector<FlashContext>& contexts,
                                             const DenseTensor& d_out,
                                             const BatchOptions& opts = {});

}  // namespace fwattn
