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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fwattn/tile_config.hpp"

namespace fwattn::harness {

/// Thrown for bad command-line values; the CLI maps it to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chunk count, or the benchmark rule r = C / 16 ("auto").
struct ChunkRule {
  bool is_auto = true;
  std::size_t value = 0;

  static ChunkRule automatic() { return {true, 0}; }
  static ChunkRule fixed(std::size_t r) { return {false, r}; }

  /// Throws UsageError on anything but "auto" or a positive integer.
  static ChunkRule parse(std::string_view text);

  /// Chunk count for C channels, or nullopt if the rule is undefined there.
  std::optional<std::size_t> resolve(std::size_t channels) const;

  std::string to_string() const;
};

using OperandCounts = std::map<std::string, std::uint64_t>;

/// Closed-form global traffic of the tiled kernels for one L x C window.
OperandCounts expected_forward_loads(std::size_t seq_len, std::size_t channels);
OperandCounts expected_forward_stores(std::size_t seq_len, std::size_t channels);
OperandCounts expected_backward_loads(std::size_t seq_len, std::size_t channels);
OperandCounts expected_backward_stores(std::size_t seq_len, std::size_t channels);

std::int64_t monotonic_ns();

}  // namespace fwattn::harness
