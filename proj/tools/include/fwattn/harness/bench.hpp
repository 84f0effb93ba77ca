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
#include <string_view>
#include <vector>

#include "fwattn/harness/common.hpp"
#include "fwattn/memory_model.hpp"

namespace fwattn::harness {

enum class Impl { kFlash, kNaive };
enum class Pass { kFwd, kFwdBwd };

std::string_view to_string(Impl impl);
std::string_view to_string(Pass pass);
Impl parse_impl(std::string_view text);
Pass parse_pass(std::string_view text);

/// One timed configuration. `batch` counts windows (sequences after window
/// partition), not images.
struct BenchRow {
  std::size_t batch = 0;
  std::size_t heads = 0;
  std::size_t seq_len = 0;
  std::size_t channels = 0;
  std::size_t chunks = 0;
  Impl impl = Impl::kFlash;
  Pass pass = Pass::kFwd;
  std::int64_t elapsed_ns = 0;
  std::uint64_t peak_sram_bytes = 0;
  std::uint64_t total_global_elements = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline constexpr std::string_view kBenchCsvHeader =
    "batch,heads,L,C,r,impl,pass,elapsed_ns,peak_sram_bytes,total_global_elements";

struct BenchOptions {
  std::vector<std::size_t> batches{16, 64};
  std::size_t heads = 4;
  std::size_t seq_len = 64;
  std::vector<std::size_t> channels{64, 256};
  ChunkRule chunks = ChunkRule::automatic();
  std::vector<Pass> passes{Pass::kFwd};
  std::size_t repeats = 3;
  std::uint64_t seed = 42;
  std::size_t elem_bytes = 4;
  std::uint64_t capacity_bytes = ScratchpadArena::kDefaultCapacityBytes;
  std::size_t workers = 1;
};

/// Element counts and scratchpad peak of the materializing baseline, modeled
/// as a chain of unfused kernels that each hold their whole operands on chip
/// and exchange S, P (and dP, dS) through global memory:
///   fwd:     QK^T, softmax, PV           -> 4LC + 4L^2 elements
///   fwd_bwd: adds P^T dO, dO V^T, softmax
///            backward, dS K, dS^T Q      -> 12LC + 11L^2 elements
std::uint64_t naive_global_elements(std::size_t seq_len, std::size_t channels, Pass pass);
std::uint64_t naive_peak_elements(std::size_t seq_len, std::size_t channels, Pass pass);

/// Times naive and flash attention over batches x channels x passes: one
/// warm-up, then the median of `repeats` timed calls. Rows come back sorted
/// by (batch, heads, L, C, r, impl, pass). Throws UsageError on bad axes.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

/// Inverse of write_bench_csv; throws UsageError on a malformed table.
std::vector<BenchRow> parse_bench_csv(std::istream& is);

}  // namespace fwattn::harness
