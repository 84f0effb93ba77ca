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

#include "fwattn/batched.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

#include "fwattn/error.hpp"

namespace fwattn {

namespace {

void require_batched(const DenseTensor& t, const char* op) {
  if (t.rank() != 4) {
    throw ShapeError(std::string(op) + ": expected B x heads x L x C, got " +
                     t.shape().to_string());
  }
}

// Calls fn(slice, arena) for every slice on `workers` threads, then rethrows
// the error of the lowest failing slice (if any).
template <typename Fn>
void run_slices(std::size_t num_slices, std::size_t heads, const BatchOptions& opts, Fn&& fn) {
  std::vector<std::exception_ptr> errors(num_slices);
  const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(num_slices, 1));
  auto work = [&](std::size_t first) {
    ScratchpadArena arena(opts.capacity_bytes);
    for (std::size_t s = first; s < num_slices; s += workers) {
      try {
        fn(s, arena);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (std::size_t s = 0; s < num_slices; ++s) {
    if (!errors[s]) continue;
    try {
      std::rethrow_exception(errors[s]);
    } catch (const Error& e) {
      rethrow_with_prefix(e, "slice (b=" + std::to_string(s / heads) +
                                 ", head=" + std::to_string(s % heads) + "): ");
    }
  }
}

}  // namespace

BatchedForwardResult batched_flash_forward(const DenseTensor& q, const DenseTensor& k,
                                           const DenseTensor& v, const TileConfig& cfg,
                                           const BatchOptions& opts) {
  require_batched(q, "batched_flash_forward");
  require_same_shape(q, k, "batched_flash_forward");
  require_same_shape(q, v, "batched_flash_forward");
  const std::size_t batch = q.shape()[0], heads = q.shape()[1];
  const std::size_t n = batch * heads;

  BatchedForwardResult result{zeros(q.shape()), std::vector<FlashContext>(n), {}};
  std::vector<TrafficReport> reports(n);
  run_slices(n, heads, opts, [&](std::size_t s, ScratchpadArena& arena) {
    const std::size_t b = s / heads, h = s % heads;
    FlashForwardResult r = flash_forward(slice_matrix(q, b, h), slice_matrix(k, b, h),
                                         slice_matrix(v, b, h), cfg, arena);
    assign_matrix(result.output, b, h, r.output);
    result.contexts[s] = std::move(r.context);
    reports[s] = std::move(r.report);
  });
  for (const auto& r : reports) result.report.merge(r);
  return result;
}

BatchedBackwardResult batched_flash_backward(const std::vector<FlashContext>& contexts,
                                             const DenseTensor& d_out,
                                             const BatchOptions& opts) {
  require_batched(d_out, "batched_flash_backward");
  const std::size_t batch = d_out.shape()[0], heads = d_out.shape()[1];
  const std::size_t n = batch * heads;
  if (contexts.size() != n) {
    throw ContextError("batched_flash_backward: " + std::to_string(contexts.size()) +
                       " contexts for " + std::to_string(n) + " slices");
  }

  BatchedBackwardResult result{
      {zeros(d_out.shape()), zeros(d_out.shape()), zeros(d_out.shape())}, {}};
  std::vector<TrafficReport> reports(n);
  run_slices(n, heads, opts, [&](std::size_t s, ScratchpadArena& arena) {
    const std::size_t b = s / heads, h = s % heads;
    FlashBackwardResult r = flash_backward(contexts[s], slice_matrix(d_out, b, h), arena);
    assign_matrix(result.grads.dq, b, h, r.grads.dq);
    assign_matrix(result.grads.dk, b, h, r.grads.dk);
    assign_matrix(result.grads.dv, b, h, r.grads.dv);
    reports[s] = std::move(r.report);
  });
  for (const auto& r : reports) result.report.merge(r);
  return result;
}

}  // namespace fwattn
