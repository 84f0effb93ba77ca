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

#include "fwattn/flash_attention.hpp"

#include <string>

#include "fwattn/error.hpp"

namespace fwattn {

namespace {

void require_matrix_operands(const DenseTensor& q, const DenseTensor& k, const DenseTensor& v,
                             const char* op) {
  if (q.rank() != 2) {
    throw ShapeError(std::string(op) + ": Q must be L x C, got " + q.shape().to_string());
  }
  require_same_shape(q, k, op);
  require_same_shape(q, v, op);
}

void require_capacity(const ScratchpadArena& arena, std::uint64_t required) {
  const std::uint64_t free_bytes = arena.capacity_bytes() - arena.live_bytes();
  if (required > free_bytes) throw CapacityError(required, free_bytes);
}

// S += A B^T, A and B both L x w.
void accumulate_abt(ScratchBuffer& s, const ScratchBuffer& a, const ScratchBuffer& b) {
  const std::size_t L = s.rows(), w = a.cols();
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < w; ++c) acc += a.at(i, c) * b.at(j, c);
      s.at(i, j) += acc;
    }
  }
}

// out = factor * M X, M is L x L, X is L x w.
void multiply(ScratchBuffer& out, const ScratchBuffer& m, const ScratchBuffer& x,
              double factor = 1.0) {
  const std::size_t L = m.rows(), w = x.cols();
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t c = 0; c < w; ++c) out.at(i, c) = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      const double mij = m.at(i, j);
      for (std::size_t c = 0; c < w; ++c) out.at(i, c) += mij * x.at(j, c);
    }
    if (factor != 1.0)
      for (std::size_t c = 0; c < w; ++c) out.at(i, c) *= factor;
  }
}

// out = factor * M^T X.
void multiply_transposed(ScratchBuffer& out, const ScratchBuffer& m, const ScratchBuffer& x,
                         double factor = 1.0) {
  const std::size_t L = m.rows(), w = x.cols();
  for (double& e : out.data()) e = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      const double mij = m.at(i, j);
      for (std::size_t c = 0; c < w; ++c) out.at(j, c) += mij * x.at(i, c);
    }
  }
  if (factor != 1.0)
    for (double& e : out.data()) e *= factor;
}

void scale_inplace(ScratchBuffer& s, double factor) {
  if (factor == 1.0) return;
  for (double& e : s.data()) e *= factor;
}

// Phase shared by forward and backward: P = softmax(scale * sum_i Q_i K_i^T)
// accumulated into `p`, reading one Q/K chunk pair at a time.
void build_weights(ScratchBuffer& p, GlobalMemory& gm, ScratchpadArena& arena,
                   std::size_t L, std::size_t C, const TileConfig& cfg) {
  for (std::size_t i = 0; i < cfg.chunks; ++i) {
    const std::size_t col = cfg.chunk_begin(C, i), w = cfg.chunk_size(C, i);
    ScratchBuffer qi = arena.allocate(L, w, cfg.elem_bytes);
    ScratchBuffer ki = arena.allocate(L, w, cfg.elem_bytes);
    gm.load_columns("Q", col, qi);
    gm.load_columns("K", col, ki);
    accumulate_abt(p, qi, ki);
  }
  scale_inplace(p, cfg.scale);
  softmax_rows_inplace(p.data(), L, L);
}

}  // namespace

FlashContext::FlashContext(std::shared_ptr<const DenseTensor> q,
                           std::shared_ptr<const DenseTensor> k,
                           std::shared_ptr<const DenseTensor> v, TileConfig cfg)
    : q_(std::move(q)), k_(std::move(k)), v_(std::move(v)), cfg_(cfg) {}

FlashForwardResult flash_forward(const DenseTensor& q, const DenseTensor& k,
                                 const DenseTensor& v, const TileConfig& cfg,
                                 ScratchpadArena& arena) {
  require_matrix_operands(q, k, v, "flash_forward");
  const std::size_t L = q.rows(), C = q.cols();
  cfg.validate(C);
  require_capacity(arena, peak_sram_forward(L, C, cfg));

  auto q_ptr = std::make_shared<const DenseTensor>(q);
  auto k_ptr = std::make_shared<const DenseTensor>(k);
  auto v_ptr = std::make_shared<const DenseTensor>(v);
  DenseTensor out = zeros(q.shape());

  GlobalMemory gm;
  gm.bind_input("Q", *q_ptr);
  gm.bind_input("K", *k_ptr);
  gm.bind_input("V", *v_ptr);
  gm.bind_output("O", out);

  arena.reset_peak();
  {
    ScratchBuffer p = arena.allocate(L, L, cfg.elem_bytes);
    build_weights(p, gm, arena, L, C, cfg);
    for (std::size_t i = 0; i < cfg.chunks; ++i) {
      const std::size_t col = cfg.chunk_begin(C, i), w = cfg.chunk_size(C, i);
      ScratchBuffer vi = arena.allocate(L, w, cfg.elem_bytes);
      gm.load_columns("V", col, vi);
      ScratchBuffer oi = arena.allocate(L, w, cfg.elem_bytes);
      multiply(oi, p, vi);
      gm.store_columns("O", col, oi);
    }
  }

  TrafficReport report = gm.take_report();
  report.peak_sram_bytes = arena.peak_bytes();
  return {std::move(out),
          FlashContext(std::move(q_ptr), std::move(k_ptr), std::move(v_ptr), cfg),
          std::move(report)};
}

FlashBackwardResult flash_backward(const FlashContext& ctx, const DenseTensor& d_out,
                                   ScratchpadArena& arena) {
  if (!ctx.valid()) {
    throw ContextError("flash_backward: context does not come from a flash_forward call");
  }
  const DenseTensor& q = ctx.q();
  require_same_shape(q, d_out, "flash_backward");
  const std::size_t L = ctx.seq_len(), C = ctx.channels();
  const TileConfig& cfg = ctx.config();
  require_capacity(arena, peak_sram_backward(L, C, cfg));

  AttnGradients grads{zeros(q.shape()), zeros(q.shape()), zeros(q.shape())};
  GlobalMemory gm;
  gm.bind_input("Q", q);
  gm.bind_input("K", ctx.k());
  gm.bind_input("V", ctx.v());
  gm.bind_input("dO", d_out);
  gm.bind_output("dQ", grads.dq);
  gm.bind_output("dK", grads.dk);
  gm.bind_output("dV", grads.dv);

  arena.reset_peak();
  {
    ScratchBuffer p = arena.allocate(L, L, cfg.elem_bytes);
    ScratchBuffer dp = arena.allocate(L, L, cfg.elem_bytes);
    build_weights(p, gm, arena, L, C, cfg);

    // dV_i leaves the chip before V_i arrives, so only two L x w chunks are
    // ever co-resident with P and dP.
    for (std::size_t i = 0; i < cfg.chunks; ++i) {
      const std::size_t col = cfg.chunk_begin(C, i), w = cfg.chunk_size(C, i);
      ScratchBuffer doi = arena.allocate(L, w, cfg.elem_bytes);
      gm.load_columns("dO", col, doi);
      {
        ScratchBuffer dvi = arena.allocate(L, w, cfg.elem_bytes);
        multiply_transposed(dvi, p, doi);
        gm.store_columns("dV", col, dvi);
      }
      ScratchBuffer vi = arena.allocate(L, w, cfg.elem_bytes);
      gm.load_columns("V", col, vi);
      accumulate_abt(dp, doi, vi);
    }

    // dS overwrites dP.
    for (std::size_t i = 0; i < L; ++i) {
      double dot = 0.0;
      for (std::size_t l = 0; l < L; ++l) dot += p.at(i, l) * dp.at(i, l);
      for (std::size_t j = 0; j < L; ++j) dp.at(i, j) = p.at(i, j) * (dp.at(i, j) - dot);
    }
    p.release();
    ScratchBuffer& ds = dp;

    for (std::size_t i = 0; i < cfg.chunks; ++i) {
      const std::size_t col = cfg.chunk_begin(C, i), w = cfg.chunk_size(C, i);
      {
        ScratchBuffer ki = arena.allocate(L, w, cfg.elem_bytes);
        gm.load_columns("K", col, ki);
        ScratchBuffer dqi = arena.allocate(L, w, cfg.elem_bytes);
        multiply(dqi, ds, ki, cfg.scale);
        gm.store_columns("dQ", col, dqi);
      }
      ScratchBuffer qi = arena.allocate(L, w, cfg.elem_bytes);
      gm.load_columns("Q", col, qi);
      ScratchBuffer dki = arena.allocate(L, w, cfg.elem_bytes);
      multiply_transposed(dki, ds, qi, cfg.scale);
      gm.store_columns("dK", col, dki);
    }
  }

  TrafficReport report = gm.take_report();
  report.peak_sram_bytes = arena.peak_bytes();
  return {std::move(grads), std::move(report)};
}

}  // namespace fwattn
