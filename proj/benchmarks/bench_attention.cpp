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

// Desk-scale timings of one window batch: flash forward (with and without
// backward) against the naive reference. Args: {batch, C}; L = 64, 4 heads.

#include <benchmark/benchmark.h>

#include "fwattn/fwattn.hpp"

namespace {

using namespace fwattn;

constexpr std::size_t kHeads = 4;
constexpr std::size_t kSeqLen = 64;

struct Inputs {
  DenseTensor q, k, v, d_out;
  TileConfig cfg;
};

Inputs make_inputs(const benchmark::State& state) {
  const auto batch = state.range(0);
  const auto C = static_cast<std::size_t>(state.range(1));
  Rng rng(42);
  const Shape s{batch, static_cast<Extent>(kHeads), static_cast<Extent>(kSeqLen),
                static_cast<Extent>(C)};
  Inputs in{fill_uniform(rng, s, -1.0, 1.0), fill_uniform(rng, s, -1.0, 1.0),
            fill_uniform(rng, s, -1.0, 1.0), fill_uniform(rng, s, -1.0, 1.0), {}};
  in.cfg = TileConfig{auto_chunks(C).value_or(1), 1.0, 4};
  return in;
}

void BM_FlashForward(benchmark::State& state) {
  const Inputs in = make_inputs(state);
  for (auto _ : state) {
    BatchedForwardResult f = batched_flash_forward(in.q, in.k, in.v, in.cfg, {});
    benchmark::DoNotOptimize(f.output.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * kHeads);
}

void BM_FlashForwardBackward(benchmark::State& state) {
  const Inputs in = make_inputs(state);
  for (auto _ : state) {
    BatchedForwardResult f = batched_flash_forward(in.q, in.k, in.v, in.cfg, {});
    BatchedBackwardResult b = batched_flash_backward(f.contexts, in.d_out, {});
    benchmark::DoNotOptimize(b.grads.dq.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * kHeads);
}

void BM_NaiveForward(benchmark::State& state) {
  const Inputs in = make_inputs(state);
  const auto batch = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t h = 0; h < kHeads; ++h) {
        NaiveForwardResult r = naive_forward(slice_matrix(in.q, b, h), slice_matrix(in.k, b, h),
                                             slice_matrix(in.v, b, h));
        benchmark::DoNotOptimize(r.output.data().data());
      }
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * kHeads);
}

void Shapes(benchmark::internal::Benchmark* b) {
  b->ArgNames({"batch", "C"});
  for (int batch : {16, 64})
    for (int c : {64, 256}) b->Args({batch, c});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_FlashForward)->Apply(Shapes);
BENCHMARK(BM_FlashForwardBackward)->Apply(Shapes);
BENCHMARK(BM_NaiveForward)->Apply(Shapes);
BENCHMARK_MAIN();
