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

#include "fwattn/error.hpp"

namespace fwattn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidShape: return "invalid-shape";
    case ErrorCode::kShapeMismatch: return "shape";
    case ErrorCode::kInvalidRange: return "invalid-range";
    case ErrorCode::kPartition: return "partition";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kContext: return "context";
  }
  return "unknown";
}

CapacityError::CapacityError(std::uint64_t required_bytes,
                             std::uint64_t available_bytes,
                             const std::string& prefix)
    : Error(ErrorCode::kCapacity,
            prefix + "scratchpad capacity exceeded: requires " +
                std::to_string(required_bytes) + " bytes, " +
                std::to_string(available_bytes) + " bytes available"),
      required_(required_bytes),
      available_(available_bytes) {}

void rethrow_with_prefix(const Error& e, const std::string& prefix) {
  const std::string msg = prefix + e.what();
  if (auto* cap = dynamic_cast<const CapacityError*>(&e)) {
    throw CapacityError(cap->required_bytes(), cap->available_bytes(), prefix);
  }
  switch (e.code()) {
    case ErrorCode::kInvalidShape: throw InvalidShapeError(msg);
    case ErrorCode::kShapeMismatch: throw ShapeError(msg);
    case ErrorCode::kInvalidRange: throw RangeError(msg);
    case ErrorCode::kPartition: throw PartitionError(msg);
    case ErrorCode::kNumeric: throw NumericError(msg);
    case ErrorCode::kContext: throw ContextError(msg);
    case ErrorCode::kCapacity: break;
  }
  throw Error(e.code(), msg);
}

}  // namespace fwattn
