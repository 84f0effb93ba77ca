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
#include <string>
#include <vector>

#include "fwattn/harness/common.hpp"
#include "fwattn/memory_model.hpp"
#include "fwattn/window.hpp"

namespace fwattn::harness {

struct SuiteResult {
  std::string case_id;
  double max_err = 0.0;
  bool traffic_ok = true;
  bool sram_ok = true;
  std::int64_t elapsed_ns = 0;
  bool passed = false;
  std::string note;
};

struct CheckPoint {
  std::size_t seq_len;
  std::size_t channels;
  std::size_t chunks;
};

struct CheckGrid {
  std::vector<std::size_t> seq_lens;
  std::vector<std::size_t> channels;
  std::vector<ChunkRule> chunk_rules;
  std::vector<WindowConfig> windows;
  std::uint64_t capacity_bytes = ScratchpadArena::kDefaultCapacityBytes;
  std::size_t elem_bytes = 4;
  /// Finite-difference gradient cases run only where L * C is at most this.
  std::size_t fd_max_elements = 512;

  /// L in {1, 2, 8, 49, 64}, C in {16, 32, 64}, r in {1, 2, 4, auto} and a
  /// handful of window geometries including 224 x 224 x 3 with k = 7.
  static CheckGrid defaults();

  /// Cartesian product of the attention axes. Rules undefined for a given C
  /// are skipped and repeated chunk counts collapse.
  std::vector<CheckPoint> points() const;
};

struct CheckSummary {
  std::vector<SuiteResult> results;

  bool all_passed() const;
  std::size_t failures() const;
};

/// Runs every oracle, gradient, traffic, occupancy and round-trip case of
/// the grid on inputs derived from `seed`.
CheckSummary run_check(std::uint64_t seed, const CheckGrid& grid);

/// Fixed-width table; timings only when `with_timings` (they are the one
/// non-deterministic column).
void print_check_table(std::ostream& os, const CheckSummary& summary,
                       bool with_timings = false);

}  // namespace fwattn::harness
