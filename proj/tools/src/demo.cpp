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

#include "fwattn/harness/demo.hpp"

#include <algorithm>
#include <ostream>

#include "fwattn/batched.hpp"
#include "fwattn/error.hpp"
#include "fwattn/reference_attention.hpp"

namespace fwattn::harness {

DemoOutcome run_demo(const DemoOptions& opts) {
  const WindowConfig& g = opts.geometry;
  try {
    g.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("demo: ") + e.what());
  }
  std::size_t chunks = opts.chunks.resolve(g.channels).value_or(0);
  if (chunks == 0) {
    if (!opts.chunks.is_auto) {
      throw UsageError("demo: chunk count " + opts.chunks.to_string() + " invalid for C=" +
                       std::to_string(g.channels));
    }
    chunks = 1;
  }

  const Shape image{static_cast<Extent>(g.height), static_cast<Extent>(g.width),
                    static_cast<Extent>(g.channels)};
  const std::size_t N = g.num_windows(), L = g.seq_len(), C = g.channels;
  const Shape batched{static_cast<Extent>(N), 1, static_cast<Extent>(L), static_cast<Extent>(C)};

  Rng rng(opts.seed);
  const DenseTensor xq = fill_uniform(rng, image, -1.0, 1.0);
  const DenseTensor xk = fill_uniform(rng, image, -1.0, 1.0);
  const DenseTensor xv = fill_uniform(rng, image, -1.0, 1.0);

  const DenseTensor wq = window_partition(xq, g);
  const DenseTensor q = wq.reshaped(batched);
  const DenseTensor k = window_partition(xk, g).reshaped(batched);
  const DenseTensor v = window_partition(xv, g).reshaped(batched);

  const TileConfig cfg{chunks, 1.0, opts.elem_bytes};
  BatchedForwardResult f = batched_flash_forward(q, k, v, cfg, {opts.capacity_bytes, opts.workers});

  DemoOutcome out;
  out.image_shape = image;
  out.windows_shape = wq.shape();
  out.chunks = chunks;
  for (std::size_t n = 0; n < N; ++n) {
    const DenseTensor expected =
        naive_forward(slice_matrix(q, n, 0), slice_matrix(k, n, 0), slice_matrix(v, n, 0)).output;
    out.max_oracle_err =
        std::max(out.max_oracle_err, max_abs_diff(slice_matrix(f.output, n, 0), expected));
  }
  const DenseTensor o_image = window_reverse(
      std::move(f.output).reshaped(Shape{static_cast<Extent>(N), static_cast<Extent>(L),
                                         static_cast<Extent>(C)}),
      g);
  out.output_shape = o_image.shape();
  out.round_trip_err = max_abs_diff(window_reverse(wq, g), xq);
  out.traffic = std::move(f.report);
  return out;
}

void print_demo_summary(std::ostream& os, const DemoOptions& opts, const DemoOutcome& o) {
  const WindowConfig& g = opts.geometry;
  os << "geometry: " << g.to_string() << "\n"
     << "image " << o.image_shape.to_string() << " -> windows " << o.windows_shape.to_string()
     << " (N=" << g.num_windows() << ", L=" << g.seq_len() << ")\n"
     << "flash attention: heads=1, r=" << o.chunks << ", elem_bytes=" << opts.elem_bytes << "\n"
     << "output image " << o.output_shape.to_string() << "\n"
     << "max |flash - naive| over windows: " << o.max_oracle_err << "\n"
     << "partition/reverse round-trip max_abs_diff: " << o.round_trip_err << "\n"
     << "global traffic: Q " << o.traffic.load_count("Q") << ", K " << o.traffic.load_count("K")
     << ", V " << o.traffic.load_count("V") << " loads; O " << o.traffic.store_count("O")
     << " stores (" << o.traffic.total_elements() << " elements)\n"
     << "peak scratchpad per worker: " << o.traffic.peak_sram_bytes << " B of "
     << opts.capacity_bytes << " B\n";
}

}  // namespace fwattn::harness
