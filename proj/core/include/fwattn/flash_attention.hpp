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
#include <memory>

#include "fwattn/memory_model.hpp"
#include "fwattn/reference_attention.hpp"
#include "fwattn/tensor.hpp"
#include "fwattn/tile_config.hpp"

namespace fwattn {

/// What the backward pass needs from the forward pass: the global Q, K, V
/// operands and the tiling. P is deliberately absent; backward rebuilds it.
class FlashContext {
 public:
  FlashContext() = default;
  FlashContext(std::shared_ptr<const DenseTensor> q, std::shared_ptr<const DenseTensor> k,
               std::shared_ptr<const DenseTensor> v, TileConfig cfg);

  bool valid() const noexcept { return q_ != nullptr; }
  const DenseTensor& q() const { return *q_; }
  const DenseTensor& k() const { return *k_; }
  const DenseTensor& v() const { return *v_; }
  const TileConfig& config() const noexcept { return cfg_; }
  std::size_t seq_len() const { return q_->rows(); }
  std::size_t channels() const { return q_->cols(); }

 private:
  std::shared_ptr<const DenseTensor> q_, k_, v_;
  TileConfig cfg_;
};

struct FlashForwardResult {
  DenseTensor output;
  FlashContext context;
  TrafficReport report;
};

struct FlashBackwardResult {
  AttnGradients grads;
  TrafficReport report;
};

/// Feature-tiled attention forward.
///
/// Phase 1 accumulates S = sum_i Q_i K_i^T on chip, one (Q_i, K_i) chunk pair
/// resident at a time. After the row softmax, phase 2 streams V_i in and
/// O_i = P V_i out. Each of Q, K, V and O crosses global memory exactly once
/// and neither S nor P ever leaves the arena.
///
/// Throws CapacityError if peak_sram_forward() exceeds what the arena has
/// free, ShapeError on mismatched operands.
FlashForwardResult flash_forward(const DenseTensor& q, const DenseTensor& k,
                                 const DenseTensor& v, const TileConfig& cfg,
                                 ScratchpadArena& arena);

/// Feature-tiled attention backward.
///
///   1. P = softmax(scale * sum_i Q_i K_i^T), recomputed on chip.
///   2. Per chunk: dV_i = P^T dO_i is written out, dP += dO_i V_i^T.
///   3. dS = P o (dP - rowsum(P o dP)) overwrites dP; then per chunk
///      dQ_i = scale dS K_i and dK_i = scale dS^T Q_i are written out.
///
/// Q and K are read twice (phases 1 and 3); V, dO, dQ, dK, dV once.
/// Throws ContextError for a default-constructed context.
FlashBackwardResult flash_backward(const FlashContext& ctx, const DenseTensor& d_out,
                                   ScratchpadArena& arena);

}  // namespace fwattn
