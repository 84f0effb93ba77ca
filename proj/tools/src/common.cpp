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

#include "fwattn/harness/common.hpp"

#include <charconv>
#include <chrono>

namespace fwattn::harness {

ChunkRule ChunkRule::parse(std::string_view text) {
  if (text == "auto") return automatic();
  std::size_t r = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), r);
  if (ec != std::errc{} || end != text.data() + text.size() || r == 0) {
    throw UsageError("invalid chunk count '" + std::string(text) +
                     "': expected a positive integer or 'auto'");
  }
  return fixed(r);
}

std::optional<std::size_t> ChunkRule::resolve(std::size_t channels) const {
  if (is_auto) return auto_chunks(channels);
  try {
    TileConfig{value}.validate(channels);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return value;
}

std::string ChunkRule::to_string() const {
  return is_auto ? "auto" : std::to_string(value);
}

OperandCounts expected_forward_loads(std::size_t seq_len, std::size_t channels) {
  const std::uint64_t lc = static_cast<std::uint64_t>(seq_len) * channels;
  return {{"Q", lc}, {"K", lc}, {"V", lc}};
}

OperandCounts expected_forward_stores(std::size_t seq_len, std::size_t channels) {
  const std::uint64_t lc = static_cast<std::uint64_t>(seq_len) * channels;
  return {{"O", lc}};
}

OperandCounts expected_backward_loads(std::size_t seq_len, std::size_t channels) {
  const std::uint64_t lc = static_cast<std::uint64_t>(seq_len) * channels;
  return {{"Q", 2 * lc}, {"K", 2 * lc}, {"V", lc}, {"dO", lc}};
}

OperandCounts expected_backward_stores(std::size_t seq_len, std::size_t channels) {
  const std::uint64_t lc = static_cast<std::uint64_t>(seq_len) * channels;
  return {{"dQ", lc}, {"dK", lc}, {"dV", lc}};
}

std::int64_t monotonic_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace fwattn::harness
