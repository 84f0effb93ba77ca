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

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "fwattn/error.hpp"
#include "fwattn/flash_attention.hpp"
#include "test_util.hpp"

namespace fwattn {
namespace {

using testing::random_matrix;

struct Inputs {
  DenseTensor q, k, v, d_out;
};

Inputs make_inputs(std::uint64_t seed, std::size_t L, std::size_t C) {
  return {random_matrix(seed, L, C), random_matrix(seed + 1, L, C),
          random_matrix(seed + 2, L, C), random_matrix(seed + 3, L, C)};
}

std::vector<std::size_t> chunk_counts(std::size_t C) {
  std::set<std::size_t> rs{1, 2, 4};
  if (auto r = auto_chunks(C)) rs.insert(*r);
  return {rs.begin(), rs.end()};
}

TEST(PeakSramTest, ClosedForms) {
  // 64 x 64 scores plus two 64 x 16 fp32 chunks: the 24 kB forward figure.
  EXPECT_EQ(peak_sram_forward(64, 64, TileConfig{4, 1.0, 4}), 24576u);
  EXPECT_EQ(peak_sram_forward(64, 256, TileConfig{16, 1.0, 4}), 24576u);
  EXPECT_EQ(peak_sram_backward(64, 64, TileConfig{4, 1.0, 4}), 40960u);
  EXPECT_EQ(peak_sram_forward(49, 32, TileConfig{2, 1.0, 4}), 15876u);
  EXPECT_EQ(peak_sram_backward(8, 4, TileConfig{2, 1.0, 8}), 1280u);
  EXPECT_EQ(peak_sram_forward(8, 4, TileConfig{1, 1.0, 8}), (64u + 2 * 8 * 4) * 8);
  EXPECT_EQ(peak_sram_backward(8, 4, TileConfig{1, 1.0, 8}), (128u + 2 * 8 * 4) * 8);
}

TEST(TileConfigTest, Validation) {
  EXPECT_NO_THROW(TileConfig{3}.validate(10));
  EXPECT_EQ(TileConfig{3}.chunk_width(10), 4u);
  EXPECT_EQ(TileConfig{3}.chunk_size(10, 2), 2u);
  EXPECT_THROW(TileConfig{0}.validate(8), RangeError);
  EXPECT_THROW(TileConfig{9}.validate(8), RangeError);
  // ceil(5/4) = 2 leaves the fourth chunk empty.
  EXPECT_THROW(TileConfig{4}.validate(5), RangeError);
  EXPECT_THROW((TileConfig{1, -1.0}).validate(8), RangeError);
  EXPECT_THROW((TileConfig{1, 1.0, 0}).validate(8), RangeError);
  EXPECT_EQ(auto_chunks(64), 4u);
  EXPECT_EQ(auto_chunks(16), 1u);
  EXPECT_FALSE(auto_chunks(24).has_value());
  EXPECT_FALSE(auto_chunks(8).has_value());
}

TEST(ChunkSumTest, ChunkedScoresEqualFullProduct) {
  const DenseTensor q = random_matrix(5, 16, 32), k = random_matrix(6, 16, 32);
  const DenseTensor full = matmul(q, transpose(k));
  for (std::size_t r : {1, 2, 4, 8}) {
    const TileConfig cfg{r};
    DenseTensor acc = zeros(Shape{16, 16});
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t c0 = cfg.chunk_begin(32, i), w = cfg.chunk_size(32, i);
      for (std::size_t a = 0; a < 16; ++a)
        for (std::size_t b = 0; b < 16; ++b)
          for (std::size_t c = c0; c < c0 + w; ++c) acc.at(a, b) += q.at(a, c) * k.at(b, c);
    }
    EXPECT_LE(max_abs_diff(acc, full), 1e-10) << "r=" << r;
  }
}

TEST(FlashForwardTest, Width16Traffic) {
  const Inputs in = make_inputs(1, 64, 64);
  ScratchpadArena arena;
  const FlashForwardResult r = flash_forward(in.q, in.k, in.v, TileConfig{4, 1.0, 4}, arena);
  EXPECT_EQ(r.report.loads,
            (std::map<std::string, std::uint64_t>{{"K", 4096}, {"Q", 4096}, {"V", 4096}}));
  EXPECT_EQ(r.report.stores, (std::map<std::string, std::uint64_t>{{"O", 4096}}));
  EXPECT_EQ(r.report.peak_sram_bytes, 24576u);
  EXPECT_EQ(arena.peak_bytes(), 24576u);
  EXPECT_EQ(arena.live_bytes(), 0u);
}

TEST(FlashForwardTest, ZeroKeysGiveColumnMeans) {
  const Inputs in = make_inputs(2, 9, 6);
  for (std::size_t r : {1, 2, 3, 6}) {
    ScratchpadArena arena;
    const DenseTensor o = flash_forward(in.q, zeros(Shape{9, 6}), in.v, TileConfig{r}, arena).output;
    const DenseTensor naive = naive_forward(in.q, zeros(Shape{9, 6}), in.v).output;
    EXPECT_LE(max_abs_diff(o, naive), 1e-15);
  }
}

TEST(FlashForwardTest, MatchesNaiveAcrossGridAndChunkCounts) {
  std::uint64_t seed = 50;
  for (std::size_t L : {1, 2, 8, 49, 64}) {
    for (std::size_t C : {16, 32, 64}) {
      const Inputs in = make_inputs(seed += 10, L, C);
      const DenseTensor expected = naive_forward(in.q, in.k, in.v).output;
      DenseTensor first;
      for (std::size_t r : chunk_counts(C)) {
        ScratchpadArena arena;
        const FlashForwardResult res = flash_forward(in.q, in.k, in.v, TileConfig{r}, arena);
        EXPECT_LE(max_abs_diff(res.output, expected), 1e-10) << L << " " << C << " " << r;
        if (first.size() == 0) first = res.output;
        EXPECT_LE(max_abs_diff(res.output, first), 1e-10);
        EXPECT_EQ(res.report.load_count("Q"), L * C);
        EXPECT_EQ(res.report.load_count("K"), L * C);
        EXPECT_EQ(res.report.load_count("V"), L * C);
        EXPECT_EQ(res.report.store_count("O"), L * C);
        EXPECT_EQ(res.report.peak_sram_bytes, peak_sram_forward(L, C, TileConfig{r}));
      }
    }
  }
}

TEST(FlashForwardTest, RaggedChunks) {
  const Inputs in = make_inputs(3, 7, 10);
  ScratchpadArena arena;
  const TileConfig cfg{3};
  const FlashForwardResult res = flash_forward(in.q, in.k, in.v, cfg, arena);
  EXPECT_LE(max_abs_diff(res.output, naive_forward(in.q, in.k, in.v).output), 1e-12);
  EXPECT_EQ(res.report.load_count("Q"), 70u);
  EXPECT_EQ(res.report.peak_sram_bytes, peak_sram_forward(7, 10, cfg));
}

TEST(FlashForwardTest, ScaleMatchesNaive) {
  const Inputs in = make_inputs(4, 16, 16);
  ScratchpadArena arena;
  const TileConfig cfg{2, 0.25};
  const FlashForwardResult f = flash_forward(in.q, in.k, in.v, cfg, arena);
  EXPECT_LE(max_abs_diff(f.output, naive_forward(in.q, in.k, in.v, {0.25}).output), 1e-12);
  const FlashBackwardResult b = flash_backward(f.context, in.d_out, arena);
  const auto nf = naive_forward(in.q, in.k, in.v, {0.25});
  const AttnGradients ng = naive_backward(in.q, in.k, in.v, nf.cache, in.d_out, {0.25});
  EXPECT_LE(max_abs_diff(b.grads.dq, ng.dq), 1e-12);
  EXPECT_LE(max_abs_diff(b.grads.dk, ng.dk), 1e-12);
  EXPECT_LE(max_abs_diff(b.grads.dv, ng.dv), 1e-12);
}

TEST(FlashForwardTest, OnlyLxCOperandsTouchGlobalMemory) {
  const Inputs in = make_inputs(5, 12, 32);
  ScratchpadArena arena;
  const FlashForwardResult f = flash_forward(in.q, in.k, in.v, TileConfig{2}, arena);
  const FlashBackwardResult b = flash_backward(f.context, in.d_out, arena);
  for (const TrafficReport* r : {&f.report, &b.report}) {
    for (const auto& [name, ext] : r->operand_extents) {
      EXPECT_EQ(ext, (std::pair<std::size_t, std::size_t>{12, 32})) << name;
    }
  }
  EXPECT_EQ(f.report.operand_extents.size(), 4u);
  EXPECT_EQ(b.report.operand_extents.size(), 7u);
}

TEST(FlashForwardTest, CapacityBoundary) {
  const Inputs in = make_inputs(6, 16, 32);
  const TileConfig cfg{2, 1.0, 4};
  const std::uint64_t need = peak_sram_forward(16, 32, cfg);
  ScratchpadArena exact(need);
  EXPECT_NO_THROW(flash_forward(in.q, in.k, in.v, cfg, exact));
  EXPECT_EQ(exact.peak_bytes(), need);
  ScratchpadArena short_by_one(need - 1);
  EXPECT_THROW(flash_forward(in.q, in.k, in.v, cfg, short_by_one), CapacityError);
}

TEST(FlashForwardTest, LargeWindowExceedsScratchpad) {
  const Inputs in = make_inputs(7, 1024, 32);
  ScratchpadArena arena;
  try {
    (void)flash_forward(in.q, in.k, in.v, TileConfig{2, 1.0, 4}, arena);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.required_bytes(), (1024u * 1024 + 2 * 1024 * 16) * 4);
    EXPECT_EQ(e.available_bytes(), 131072u);
    EXPECT_NE(std::string(e.what()).find("131072"), std::string::npos);
  }
  EXPECT_EQ(arena.live_bytes(), 0u);
  EXPECT_NO_THROW(naive_forward(in.q, in.k, in.v));
}

TEST(FlashForwardTest, ShapeErrors) {
  ScratchpadArena arena;
  EXPECT_THROW(flash_forward(zeros(Shape{4, 4}), zeros(Shape{4, 3}), zeros(Shape{4, 4}),
                             TileConfig{1}, arena),
               ShapeError);
  EXPECT_THROW(flash_forward(zeros(Shape{4}), zeros(Shape{4}), zeros(Shape{4}), TileConfig{1},
                             arena),
               ShapeError);
  EXPECT_THROW(flash_forward(zeros(Shape{4, 4}), zeros(Shape{4, 4}), zeros(Shape{4, 4}),
                             TileConfig{5}, arena),
               RangeError);
}

TEST(FlashBackwardTest, Width16TrafficAndFootprint) {
  const Inputs in = make_inputs(8, 64, 64);
  ScratchpadArena arena;
  const FlashForwardResult f = flash_forward(in.q, in.k, in.v, TileConfig{4, 1.0, 4}, arena);
  const FlashBackwardResult b = flash_backward(f.context, in.d_out, arena);
  EXPECT_EQ(b.report.loads, (std::map<std::string, std::uint64_t>{
                                {"K", 8192}, {"Q", 8192}, {"V", 4096}, {"dO", 4096}}));
  EXPECT_EQ(b.report.stores, (std::map<std::string, std::uint64_t>{
                                 {"dK", 4096}, {"dQ", 4096}, {"dV", 4096}}));
  EXPECT_EQ(b.report.peak_sram_bytes, 40960u);
  EXPECT_EQ(arena.live_bytes(), 0u);
}

TEST(FlashBackwardTest, ZeroUpstreamKeepsTraffic) {
  const Inputs in = make_inputs(9, 8, 16);
  ScratchpadArena arena;
  const FlashForwardResult f = flash_forward(in.q, in.k, in.v, TileConfig{2}, arena);
  const FlashBackwardResult nonzero = flash_backward(f.context, in.d_out, arena);
  const FlashBackwardResult zero = flash_backward(f.context, zeros(Shape{8, 16}), arena);
  EXPECT_EQ(max_abs_diff(zero.grads.dq, zeros(Shape{8, 16})), 0.0);
  EXPECT_EQ(max_abs_diff(zero.grads.dk, zeros(Shape{8, 16})), 0.0);
  EXPECT_EQ(max_abs_diff(zero.grads.dv, zeros(Shape{8, 16})), 0.0);
  EXPECT_EQ(zero.report, nonzero.report);
}

TEST(FlashBackwardTest, MatchesNaiveAcrossGrid) {
  std::uint64_t seed = 500;
  for (std::size_t L : {1, 2, 8, 49, 64}) {
    for (std::size_t C : {16, 32, 64}) {
      const Inputs in = make_inputs(seed += 10, L, C);
      const auto nf = naive_forward(in.q, in.k, in.v);
      const AttnGradients ng = naive_backward(in.q, in.k, in.v, nf.cache, in.d_out);
      for (std::size_t r : chunk_counts(C)) {
        ScratchpadArena arena;
        const TileConfig cfg{r};
        const FlashForwardResult f = flash_forward(in.q, in.k, in.v, cfg, arena);
        const FlashBackwardResult b = flash_backward(f.context, in.d_out, arena);
        EXPECT_LE(max_abs_diff(b.grads.dq, ng.dq), 1e-10) << L << " " << C << " " << r;
        EXPECT_LE(max_abs_diff(b.grads.dk, ng.dk), 1e-10) << L << " " << C << " " << r;
        EXPECT_LE(max_abs_diff(b.grads.dv, ng.dv), 1e-10) << L << " " << C << " " << r;
        EXPECT_EQ(b.report.load_count("Q"), 2 * L * C);
        EXPECT_EQ(b.report.load_count("K"), 2 * L * C);
        EXPECT_EQ(b.report.load_count("V"), L * C);
        EXPECT_EQ(b.report.load_count("dO"), L * C);
        EXPECT_EQ(b.report.store_count("dQ"), L * C);
        EXPECT_EQ(b.report.store_count("dK"), L * C);
        EXPECT_EQ(b.report.store_count("dV"), L * C);
        EXPECT_EQ(b.report.peak_sram_bytes, peak_sram_backward(L, C, cfg));
      }
    }
  }
}

TEST(FlashBackwardTest, MatchesFiniteDifferences) {
  const Inputs in = make_inputs(10, 8, 4);
  const TileConfig cfg{2};
  ScratchpadArena arena;
  const FlashForwardResult f = flash_forward(in.q, in.k, in.v, cfg, arena);
  const FlashBackwardResult b = flash_backward(f.context, in.d_out, arena);
  auto loss = [&](const DenseTensor& q, const DenseTensor& k, const DenseTensor& v) {
    ScratchpadArena a;
    return inner_product(in.d_out, flash_forward(q, k, v, cfg, a).output);
  };
  const DenseTensor fq =
      finite_diff_grad([&](const DenseTensor& x) { return loss(x, in.k, in.v); }, in.q);
  const DenseTensor fk =
      finite_diff_grad([&](const DenseTensor& x) { return loss(in.q, x, in.v); }, in.k);
  const DenseTensor fv =
      finite_diff_grad([&](const DenseTensor& x) { return loss(in.q, in.k, x); }, in.v);
  EXPECT_LE(max_abs_diff(b.grads.dq, fq), 1e-6);
  EXPECT_LE(max_abs_diff(b.grads.dk, fk), 1e-6);
  EXPECT_LE(max_abs_diff(b.grads.dv, fv), 1e-6);
}

TEST(FlashBackwardTest, Errors) {
  ScratchpadArena arena;
  EXPECT_THROW(flash_backward(FlashContext{}, zeros(Shape{4, 4}), arena), ContextError);
  const Inputs in = make_inputs(11, 4, 4);
  const FlashForwardResult f = flash_forward(in.q, in.k, in.v, TileConfig{2}, arena);
  EXPECT_THROW(flash_backward(f.context, zeros(Shape{5, 4}), arena), ShapeError);
  // Forward fits (16 + 16) * 8 = 256 bytes; backward needs (32 + 16) * 8 = 384.
  ScratchpadArena small(256);
  const FlashForwardResult g = flash_forward(in.q, in.k, in.v, TileConfig{2}, small);
  EXPECT_THROW(flash_backward(g.context, in.d_out, small), CapacityError);
}

TEST(FlashContextTest, RetainsInputsNotWeights) {
  const Inputs in = make_inputs(12, 6, 8);
  ScratchpadArena arena;
  FlashForwardResult f = flash_forward(in.q, in.k, in.v, TileConfig{4}, arena);
  EXPECT_TRUE(f.context.valid());
  EXPECT_EQ(max_abs_diff(f.context.q(), in.q), 0.0);
  EXPECT_EQ(max_abs_diff(f.context.v(), in.v), 0.0);
  EXPECT_EQ(f.context.config().chunks, 4u);
  EXPECT_FALSE(FlashContext{}.valid());
}

}  // namespace
}  // namespace fwattn
