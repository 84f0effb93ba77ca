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

#include "fwattn/error.hpp"
#include "fwattn/memory_model.hpp"
#include "test_util.hpp"

namespace fwattn {
namespace {

TEST(ScratchpadArenaTest, TracksLiveAndPeak) {
  ScratchpadArena arena(1000);
  EXPECT_EQ(arena.capacity_bytes(), 1000u);
  {
    ScratchBuffer a = arena.allocate(10, 10, 4);
    EXPECT_EQ(arena.live_bytes(), 400u);
    {
      ScratchBuffer b = arena.allocate(5, 10, 8);
      EXPECT_EQ(arena.live_bytes(), 800u);
    }
    EXPECT_EQ(arena.live_bytes(), 400u);
    a.release();
    EXPECT_EQ(arena.live_bytes(), 0u);
  }
  EXPECT_EQ(arena.live_bytes(), 0u);
  EXPECT_EQ(arena.peak_bytes(), 800u);
  arena.reset_peak();
  EXPECT_EQ(arena.peak_bytes(), 0u);
}

TEST(ScratchpadArenaTest, DefaultCapacityIs128KB) {
  EXPECT_EQ(ScratchpadArena().capacity_bytes(), 131072u);
}

TEST(ScratchpadArenaTest, OverflowThrowsWithBothSizes) {
  ScratchpadArena arena(100);
  ScratchBuffer a = arena.allocate(1, 10, 8);
  try {
    (void)arena.allocate(1, 3, 8);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.required_bytes(), 104u);
    EXPECT_EQ(e.available_bytes(), 100u);
    EXPECT_EQ(e.code(), ErrorCode::kCapacity);
  }
  EXPECT_EQ(arena.live_bytes(), 80u);
}

TEST(ScratchpadArenaTest, MoveTransfersOwnership) {
  ScratchpadArena arena;
  ScratchBuffer a = arena.allocate(2, 2, 8);
  ScratchBuffer b = std::move(a);
  EXPECT_EQ(arena.live_bytes(), 32u);
  ScratchBuffer c = arena.allocate(1, 1, 8);
  c = std::move(b);
  EXPECT_EQ(arena.live_bytes(), 32u);
  EXPECT_EQ(c.rows(), 2u);
}

TEST(GlobalMemoryTest, CountsElementsPerOperand) {
  const DenseTensor src = testing::random_matrix(1, 4, 6);
  DenseTensor dst = zeros(Shape{4, 6});
  ScratchpadArena arena;
  GlobalMemory gm;
  gm.bind_input("X", src);
  gm.bind_output("Y", dst);
  ScratchBuffer buf = arena.allocate(4, 3, 8);
  gm.load_columns("X", 3, buf);
  EXPECT_EQ(buf.at(2, 1), src.at(2, 4));
  gm.store_columns("Y", 3, buf);
  gm.load_columns("X", 0, buf);
  gm.store_columns("Y", 0, buf);
  EXPECT_EQ(max_abs_diff(src, dst), 0.0);

  const TrafficReport& r = gm.report();
  EXPECT_EQ(r.load_count("X"), 24u);
  EXPECT_EQ(r.store_count("Y"), 24u);
  EXPECT_EQ(r.load_count("Y"), 0u);
  EXPECT_EQ(r.total_elements(), 48u);
  EXPECT_EQ(r.operand_extents.at("X"), (std::pair<std::size_t, std::size_t>{4, 6}));
}

TEST(GlobalMemoryTest, RejectsBadTransfers) {
  const DenseTensor src = zeros(Shape{4, 6});
  ScratchpadArena arena;
  GlobalMemory gm;
  gm.bind_input("X", src);
  ScratchBuffer buf = arena.allocate(4, 3, 8);
  EXPECT_THROW(gm.load_columns("X", 4, buf), ShapeError);
  EXPECT_THROW(gm.load_columns("Z", 0, buf), ContextError);
  EXPECT_THROW(gm.store_columns("X", 0, buf), ContextError);
  ScratchBuffer tall = arena.allocate(5, 1, 8);
  EXPECT_THROW(gm.load_columns("X", 0, tall), ShapeError);
}

TEST(TrafficReportTest, MergeSumsCountsAndMaxesPeak) {
  TrafficReport a, b;
  a.loads["Q"] = 3;
  a.peak_sram_bytes = 10;
  b.loads["Q"] = 4;
  b.stores["O"] = 2;
  b.peak_sram_bytes = 7;
  a.merge(b);
  EXPECT_EQ(a.load_count("Q"), 7u);
  EXPECT_EQ(a.store_count("O"), 2u);
  EXPECT_EQ(a.peak_sram_bytes, 10u);
}

}  // namespace
}  // namespace fwattn
