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

namespace fwattn::harness {

struct TrafficOptions {
  std::size_t seq_len = 64;
  std::size_t channels = 64;
  ChunkRule chunks = ChunkRule::automatic();
  std::size_t elem_bytes = 4;
  std::uint64_t capacity_bytes = ScratchpadArena::kDefaultCapacityBytes;
  std::uint64_t seed = 42;
};

struct TrafficOutcome {
  std::size_t chunks = 0;
  std::size_t chunk_width = 0;
  TrafficReport forward;
  TrafficReport backward;
  std::uint64_t forward_peak_closed_form = 0;
  std::uint64_t backward_peak_closed_form = 0;

  /// Instrumented counts and peaks agree with the closed forms.
  bool matches_closed_form(std::size_t seq_len, std::size_t channels) const;
};

/// Runs one instrumented forward + backward pass on seeded inputs.
/// Throws UsageError for an invalid shape or chunk rule, CapacityError if the
/// window does not fit the scratchpad.
TrafficOutcome run_traffic(const TrafficOptions& opts);

void print_traffic_text(std::ostream& os, const TrafficOptions& opts,
                        const TrafficOutcome& outcome);

/// Columns: pass,operand,loads,stores,load_bytes,store_bytes,expected_loads,expected_stores
void write_traffic_csv(std::ostream& os, const TrafficOptions& opts,
                       const TrafficOutcome& outcome);

}  // namespace fwattn::harness
