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

#include "fwattn/rng.hpp"

#include <cmath>
#include <string>

#include "fwattn/error.hpp"

namespace fwattn {

std::uint64_t Rng::next_u64() noexcept {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw RangeError("uniform: require finite lo < hi, got [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  const double x = lo + (hi - lo) * next_unit();
  // lo + (hi - lo) * u can round up to hi for u close to 1.
  return x < hi ? x : std::nextafter(hi, lo);
}

Rng Rng::split() noexcept { return Rng(next_u64()); }

}  // namespace fwattn
