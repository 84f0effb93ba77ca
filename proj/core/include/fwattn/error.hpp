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
#include <stdexcept>
#include <string>
#include <string_view>

namespace fwattn {

enum class ErrorCode {
  kInvalidShape,   // zero/negative extent, too many axes
  kShapeMismatch,  // operand extents incompatible
  kInvalidRange,   // bad numeric parameter (lo >= hi, h <= 0, r out of range)
  kPartition,      // window does not tile the image
  kNumeric,        // NaN / inf in an input or oracle evaluation
  kCapacity,       // scratchpad budget exceeded
  kContext,        // backward called without a matching forward
};

std::string_view to_string(ErrorCode code);

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what)
      : Error(ErrorCode::kShapeMismatch, what) {}

 protected:
  ShapeError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

class InvalidShapeError : public ShapeError {
 public:
  explicit InvalidShapeError(const std::string& what)
      : ShapeError(ErrorCode::kInvalidShape, what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what)
      : Error(ErrorCode::kInvalidRange, what) {}
};

class PartitionError : public Error {
 public:
  explicit PartitionError(const std::string& what)
      : Error(ErrorCode::kPartition, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorCode::kNumeric, what) {}
};

class ContextError : public Error {
 public:
  explicit ContextError(const std::string& what)
      : Error(ErrorCode::kContext, what) {}
};

/// Raised when a kernel's on-chip working set does not fit the scratchpad.
class CapacityError : public Error {
 public:
  CapacityError(std::uint64_t required_bytes, std::uint64_t available_bytes,
                const std::string& prefix = {});

  std::uint64_t required_bytes() const noexcept { return required_; }
  std::uint64_t available_bytes() const noexcept { return available_; }

 private:
  std::uint64_t required_;
  std::uint64_t available_;
};

/// Rethrows the in-flight fwattn::Error with `prefix` prepended to its
/// message, keeping the dynamic type. Must be called from a catch block.
[[noreturn]] void rethrow_with_prefix(const Error& e, const std::string& prefix);

}  // namespace fwattn
