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

#include "fwattn/memory_model.hpp"

#include <algorithm>

#include "fwattn/error.hpp"

namespace fwattn {

ScratchBuffer::ScratchBuffer(ScratchpadArena* arena, std::size_t rows, std::size_t cols,
                             std::uint64_t bytes)
    : arena_(arena), rows_(rows), cols_(cols), bytes_(bytes), data_(rows * cols, 0.0) {}

ScratchBuffer::ScratchBuffer(ScratchBuffer&& other) noexcept
    : arena_(std::exchange(other.arena_, nullptr)),
      rows_(std::exchange(other.rows_, 0)),
      cols_(std::exchange(other.cols_, 0)),
      bytes_(std::exchange(other.bytes_, 0)),
      data_(std::move(other.data_)) {}

ScratchBuffer& ScratchBuffer::operator=(ScratchBuffer&& other) noexcept {
  if (this != &other) {
    release();
    arena_ = std::exchange(other.arena_, nullptr);
    rows_ = std::exchange(other.rows_, 0);
    cols_ = std::exchange(other.cols_, 0);
    bytes_ = std::exchange(other.bytes_, 0);
    data_ = std::move(other.data_);
  }
  return *this;
}

ScratchBuffer::~ScratchBuffer() { release(); }

void ScratchBuffer::release() noexcept {
  if (arena_ != nullptr) arena_->give_back(bytes_);
  arena_ = nullptr;
  rows_ = cols_ = 0;
  bytes_ = 0;
  data_.clear();
  data_.shrink_to_fit();
}

ScratchpadArena::ScratchpadArena(std::uint64_t capacity_bytes) : capacity_(capacity_bytes) {}

ScratchBuffer ScratchpadArena::allocate(std::size_t rows, std::size_t cols,
                                        std::size_t elem_bytes) {
  const std::uint64_t bytes = static_cast<std::uint64_t>(rows) * cols * elem_bytes;
  if (live_ + bytes > capacity_) throw CapacityError(live_ + bytes, capacity_);
  live_ += bytes;
  peak_ = std::max(peak_, live_);
  return ScratchBuffer(this, rows, cols, bytes);
}

std::uint64_t TrafficReport::load_count(std::string_view operand) const {
  auto it = loads.find(std::string(operand));
  return it == loads.end() ? 0 : it->second;
}

std::uint64_t TrafficReport::store_count(std::string_view operand) const {
  auto it = stores.find(std::string(operand));
  return it == stores.end() ? 0 : it->second;
}

std::uint64_t TrafficReport::total_elements() const {
  std::uint64_t n = 0;
  for (const auto& [_, c] : loads) n += c;
  for (const auto& [_, c] : stores) n += c;
  return n;
}

void TrafficReport::merge(const TrafficReport& other) {
  for (const auto& [name, c] : other.loads) loads[name] += c;
  for (const auto& [name, c] : other.stores) stores[name] += c;
  for (const auto& [name, ext] : other.operand_extents) operand_extents.emplace(name, ext);
  peak_sram_bytes = std::max(peak_sram_bytes, other.peak_sram_bytes);
}

void GlobalMemory::bind_input(std::string name, const DenseTensor& tensor) {
  operands_[std::move(name)] = Operand{&tensor, nullptr};
}

void GlobalMemory::bind_output(std::string name, DenseTensor& tensor) {
  operands_[std::move(name)] = Operand{&tensor, &tensor};
}

GlobalMemory::Operand& GlobalMemory::find(std::string_view name) {
  auto it = operands_.find(name);
  if (it == operands_.end()) {
    throw ContextError("global memory has no operand named '" + std::string(name) + "'");
  }
  return it->second;
}

void GlobalMemory::check_window(std::string_view name, const DenseTensor& t,
                                std::size_t col_begin, std::size_t rows,
                                std::size_t cols) const {
  if (t.rank() != 2 || t.rows() != rows || col_begin + cols > t.cols()) {
    throw ShapeError("global transfer of " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " at column " + std::to_string(col_begin) + " out of bounds for '" +
                     std::string(name) + "' " + t.shape().to_string());
  }
}

void GlobalMemory::load_columns(std::string_view name, std::size_t col_begin,
                                ScratchBuffer& dst) {
  const DenseTensor& src = *find(name).read;
  check_window(name, src, col_begin, dst.rows(), dst.cols());
  for (std::size_t i = 0; i < dst.rows(); ++i)
    for (std::size_t j = 0; j < dst.cols(); ++j) dst.at(i, j) = src.at(i, col_begin + j);
  const std::string key(name);
  report_.loads[key] += static_cast<std::uint64_t>(dst.rows()) * dst.cols();
  report_.operand_extents[key] = {src.rows(), src.cols()};
}

void GlobalMemory::store_columns(std::string_view name, std::size_t col_begin,
                                 const ScratchBuffer& src) {
  Operand& op = find(name);
  if (op.write == nullptr) {
    throw ContextError("operand '" + std::string(name) + "' is read-only");
  }
  DenseTensor& dst = *op.write;
  check_window(name, dst, col_begin, src.rows(), src.cols());
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) dst.at(i, col_begin + j) = src.at(i, j);
  const std::string key(name);
  report_.stores[key] += static_cast<std::uint64_t>(src.rows()) * src.cols();
  report_.operand_extents[key] = {dst.rows(), dst.cols()};
}

}  // namespace fwattn
