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

#include "fwattn/harness/traffic.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include "fwattn/flash_attention.hpp"

namespace fwattn::harness {

namespace {

std::string kilobytes(std::uint64_t bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f kB", static_cast<double>(bytes) / 1000.0);
  return buf;
}

std::uint64_t lookup(const OperandCounts& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

struct PassView {
  const char* name;
  const TrafficReport& report;
  OperandCounts loads;
  OperandCounts stores;
};

std::set<std::string> operand_names(const PassView& p) {
  std::set<std::string> names;
  for (const auto& [n, _] : p.report.loads) names.insert(n);
  for (const auto& [n, _] : p.report.stores) names.insert(n);
  for (const auto& [n, _] : p.loads) names.insert(n);
  for (const auto& [n, _] : p.stores) names.insert(n);
  return names;
}

}  // namespace

bool TrafficOutcome::matches_closed_form(std::size_t seq_len, std::size_t channels) const {
  return forward.loads == expected_forward_loads(seq_len, channels) &&
         forward.stores == expected_forward_stores(seq_len, channels) &&
         backward.loads == expected_backward_loads(seq_len, channels) &&
         backward.stores == expected_backward_stores(seq_len, channels) &&
         forward.peak_sram_bytes == forward_peak_closed_form &&
         backward.peak_sram_bytes == backward_peak_closed_form;
}

TrafficOutcome run_traffic(const TrafficOptions& opts) {
  if (opts.seq_len == 0 || opts.channels == 0) {
    throw UsageError("traffic: L and C must be positive");
  }
  if (opts.elem_bytes == 0) throw UsageError("traffic: elem-bytes must be positive");
  const auto chunks = opts.chunks.resolve(opts.channels);
  if (!chunks) {
    throw UsageError("traffic: chunk rule '" + opts.chunks.to_string() +
                     "' is not valid for C=" + std::to_string(opts.channels));
  }
  const TileConfig cfg{*chunks, 1.0, opts.elem_bytes};
  const std::size_t L = opts.seq_len, C = opts.channels;

  Rng rng(opts.seed);
  const Shape s{static_cast<Extent>(L), static_cast<Extent>(C)};
  const DenseTensor q = fill_uniform(rng, s, -1.0, 1.0);
  const DenseTensor k = fill_uniform(rng, s, -1.0, 1.0);
  const DenseTensor v = fill_uniform(rng, s, -1.0, 1.0);
  const DenseTensor d_out = fill_uniform(rng, s, -1.0, 1.0);

  ScratchpadArena arena(opts.capacity_bytes);
  FlashForwardResult f = flash_forward(q, k, v, cfg, arena);
  FlashBackwardResult b = flash_backward(f.context, d_out, arena);

  TrafficOutcome out;
  out.chunks = *chunks;
  out.chunk_width = cfg.chunk_width(C);
  out.forward = std::move(f.report);
  out.backward = std::move(b.report);
  out.forward_peak_closed_form = peak_sram_forward(L, C, cfg);
  out.backward_peak_closed_form = peak_sram_backward(L, C, cfg);
  return out;
}

void print_traffic_text(std::ostream& os, const TrafficOptions& opts,
                        const TrafficOutcome& o) {
  const std::size_t L = opts.seq_len, C = opts.channels;
  os << "L=" << L << " C=" << C << " r=" << o.chunks << " chunk_width=" << o.chunk_width
     << " elem_bytes=" << opts.elem_bytes << " capacity=" << opts.capacity_bytes << " B\n";
  const PassView passes[] = {
      {"forward", o.forward, expected_forward_loads(L, C), expected_forward_stores(L, C)},
      {"backward", o.backward, expected_backward_loads(L, C), expected_backward_stores(L, C)}};
  const std::uint64_t closed[] = {o.forward_peak_closed_form, o.backward_peak_closed_form};
  for (int i = 0; i < 2; ++i) {
    const PassView& p = passes[i];
    os << p.name << ":\n";
    for (const std::string& name : operand_names(p)) {
      os << "  " << name << ": loads " << lookup(p.report.loads, name) << " (expected "
         << lookup(p.loads, name) << "), stores " << lookup(p.report.stores, name)
         << " (expected " << lookup(p.stores, name) << ")\n";
    }
    os << "  peak scratchpad: " << p.report.peak_sram_bytes << " B ("
       << kilobytes(p.report.peak_sram_bytes) << "), closed form " << closed[i] << " B\n";
    os << "  global traffic: " << p.report.total_elements() << " elements, "
       << p.report.total_elements() * opts.elem_bytes << " B\n";
  }
  os << (o.matches_closed_form(L, C) ? "instrumented counts match closed form\n"
                                     : "MISMATCH between instrumented counts and closed form\n");
}

void write_traffic_csv(std::ostream& os, const TrafficOptions& opts, const TrafficOutcome& o) {
  const std::size_t L = opts.seq_len, C = opts.channels;
  os << "pass,operand,loads,stores,load_bytes,store_bytes,expected_loads,expected_stores\n";
  const PassView passes[] = {
      {"fwd", o.forward, expected_forward_loads(L, C), expected_forward_stores(L, C)},
      {"bwd", o.backward, expected_backward_loads(L, C), expected_backward_stores(L, C)}};
  for (const PassView& p : passes) {
    for (const std::string& name : operand_names(p)) {
      const std::uint64_t ld = lookup(p.report.loads, name), st = lookup(p.report.stores, name);
      os << p.name << ',' << name << ',' << ld << ',' << st << ',' << ld * opts.elem_bytes << ','
         << st * opts.elem_bytes << ',' << lookup(p.loads, name) << ','
         << lookup(p.stores, name) << '\n';
    }
  }
}

}  // namespace fwattn::harness
