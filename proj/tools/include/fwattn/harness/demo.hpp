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
#include <iosfwd>

#include "fwattn/harness/common.hpp"
#include "fwattn/memory_model.hpp"
#include "fwattn/window.hpp"

namespace fwattn::harness {

struct DemoOptions {
  WindowConfig geometry{224, 224, 32, 7};
  /// auto falls back to a single chunk when C is not a multiple of 16.
  ChunkRule chunks = ChunkRule::automatic();
  std::size_t elem_bytes = 4;
  std::uint64_t capacity_bytes = ScratchpadArena::kDefaultCapacityBytes;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
};

struct DemoOutcome {
  Shape image_shape;
  Shape windows_shape;
  Shape output_shape;
  std::size_t chunks = 0;
  double max_oracle_err = 0.0;
  double round_trip_err = 0.0;
  TrafficReport traffic;
};

/// Partitions random Q/K/V images into windows, runs batched flash attention
/// with one head per window, checks every window against the naive oracle
/// and reverses the output back to image layout.
/// Throws UsageError if the window does not tile the image.
DemoOutcome run_demo(const DemoOptions& opts);

void print_demo_summary(std::ostream& os, const DemoOptions& opts, const DemoOutcome& outcome);

}  // namespace fwattn::harness
