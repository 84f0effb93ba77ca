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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fwattn/tensor.hpp"

namespace fwattn {

class ScratchpadArena;

/// A rows x cols block of on-chip storage. Its bytes are charged to the
/// owning arena for as long as the buffer is alive.
class ScratchBuffer {
 public:
  ScratchBuffer(const ScratchBuffer&) = delete;
  ScratchBuffer& operator=(const ScratchBuffer&) = delete;
  ScratchBuffer(ScratchBuffer&& other) noexcept;
  ScratchBuffer& operator=(ScratchBuffer&& other) noexcept;
  ~ScratchBuffer();

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t bytes() const noexcept { return bytes_; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  /// Returns the bytes to the arena early; the buffer becomes empty.
  void release() noexcept;

 private:
  friend class ScratchpadArena;
  ScratchBuffer(ScratchpadArena* arena, std::size_t rows, std::size_t cols,
                std::uint64_t bytes);

  ScratchpadArena* arena_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t bytes_ = 0;
  std::vector<double> data_;
};

/// Capacity-bounded model of on-chip SRAM. Tracks live bytes and the
/// high-water mark; allocation past capacity throws CapacityError.
///
/// Not thread-safe: each worker owns its own arena.
class ScratchpadArena {
 public:
  static constexpr std::uint64_t kDefaultCapacityBytes = 131072;  // 128 KB L1 per SM

  explicit ScratchpadArena(std::uint64_t capacity_bytes = kDefaultCapacityBytes);
  ScratchpadArena(const ScratchpadArena&) = delete;
  ScratchpadArena& operator=(const ScratchpadArena&) = delete;

  /// Zero-initialized rows x cols buffer accounted at `elem_bytes` per element.
  ScratchBuffer allocate(std::size_t rows, std::size_t cols, std::size_t elem_bytes);

  std::uint64_t capacity_bytes() const noexcept { return capacity_; }
  std::uint64_t live_bytes() const noexcept { return live_; }
  std::uint64_t peak_bytes() const noexcept { return peak_; }

  /// Starts a new kernel run: peak restarts from the current live bytes.
  void reset_peak() noexcept { peak_ = live_; }

 private:
  friend class ScratchBuffer;
  void give_back(std::uint64_t bytes) noexcept { live_ -= bytes; }

  std::uint64_t capacity_;
  std::uint64_t live_ = 0;
  std::uint64_t peak_ = 0;
};

/// Element-granular global-memory traffic of one or more kernel runs.
struct TrafficReport {
  std::map<std::string, std::uint64_t> loads;
  std::map<std::string, std::uint64_t> stores;
  /// rows x cols of every operand that was touched in global memory.
  std::map<std::string, std::pair<std::size_t, std::size_t>> operand_extents;
  std::uint64_t peak_sram_bytes = 0;

  std::uint64_t load_count(std::string_view operand) const;
  std::uint64_t store_count(std::string_view operand) const;
  std::uint64_t total_elements() const;

  /// Sums counts; the peak is the max because merged runs use separate arenas.
  void merge(const TrafficReport& other);

  friend bool operator==(const TrafficReport&, const TrafficReport&) = default;
};

/// Named L x C operands living in simulated global memory. Every element
/// moved between an operand and a scratch buffer is counted.
class GlobalMemory {
 public:
  void bind_input(std::string name, const DenseTensor& tensor);
  void bind_output(std::string name, DenseTensor& tensor);

  /// Copies columns [col_begin, col_begin + dst.cols()) of every row.
  void load_columns(std::string_view name, std::size_t col_begin, ScratchBuffer& dst);
  void store_columns(std::string_view name, std::size_t col_begin, const ScratchBuffer& src);

  const TrafficReport& report() const noexcept { return report_; }
  TrafficReport take_report() { return std::move(report_); }

 private:
  struct Operand {
    const DenseTensor* read = nullptr;
    DenseTensor* write = nullptr;
  };
  Operand& find(std::string_view name);
  void check_window(std::string_view name, const DenseTensor& t, std::size_t col_begin,
                    std::size_t rows, std::size_t cols) const;

  std::map<std::string, Operand, std::less<>> operands_;
  TrafficReport report_;
};

}  // namespace fwattn
