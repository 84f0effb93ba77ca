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

#include <cstdint>

namespace fwattn {

/// SplitMix64 (Steele, Lea & Flood 2014). The whole state is one 64-bit word,
/// so equal seeds give equal streams on every platform.
///
/// Reals are drawn as `(next_u64() >> 11) * 2^-53`, i.e. 53 uniformly random
/// mantissa bits in [0, 1). `split()` derives an independent child generator
/// by seeding it with the mixed output of the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 42) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1).
  double next_unit() noexcept;

  /// Uniform on [lo, hi). Throws RangeError unless lo < hi.
  double uniform(double lo, double hi);

  Rng split() noexcept;

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace fwattn
