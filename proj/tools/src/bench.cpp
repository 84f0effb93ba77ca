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

#include "fwattn/harness/bench.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <ostream>
#include <tuple>

#include "fwattn/batched.hpp"
#include "fwattn/reference_attention.hpp"

namespace fwattn::harness {

namespace {

std::int64_t median(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// One warm-up call, then the median of `repeats` timed calls.
std::int64_t time_median(std::size_t repeats, const std::function<void()>& fn) {
  fn();
  std::vector<std::int64_t> samples;
  samples.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) {
    const std::int64_t t0 = monotonic_ns();
    fn();
    samples.push_back(std::max<std::int64_t>(monotonic_ns() - t0, 1));
  }
  return median(std::move(samples));
}

auto sort_key(const BenchRow& r) {
  return std::make_tuple(r.batch, r.heads, r.seq_len, r.channels, r.chunks, to_string(r.impl),
                         to_string(r.pass));
}

template <typename T>
T parse_field(std::string_view text, const char* column) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw UsageError("bench csv: bad value '" + std::string(text) + "' in column " + column);
  }
  return value;
}

}  // namespace

std::string_view to_string(Impl impl) { return impl == Impl::kFlash ? "flash" : "naive"; }
std::string_view to_string(Pass pass) { return pass == Pass::kFwd ? "fwd" : "fwd_bwd"; }

Impl parse_impl(std::string_view text) {
  if (text == "flash") return Impl::kFlash;
  if (text == "naive") return Impl::kNaive;
  throw UsageError("unknown impl '" + std::string(text) + "'");
}

Pass parse_pass(std::string_view text) {
  if (text == "fwd") return Pass::kFwd;
  if (text == "fwd_bwd") return Pass::kFwdBwd;
  throw UsageError("unknown pass '" + std::string(text) + "' (expected fwd or fwd_bwd)");
}

std::uint64_t naive_global_elements(std::size_t seq_len, std::size_t channels, Pass pass) {
  const std::uint64_t lc = static_cast<std::uint64_t>(seq_len) * channels;
  const std::uint64_t ll = static_cast<std::uint64_t>(seq_len) * seq_len;
  return pass == Pass::kFwd ? 4 * lc + 4 * ll : 12 * lc + 11 * ll;
}

std::uint64_t naive_peak_elements(std::size_t seq_len, std::size_t channels, Pass pass) {
  const std::uint64_t lc = static_cast<std::uint64_t>(seq_len) * channels;
  const std::uint64_t ll = static_cast<std::uint64_t>(seq_len) * seq_len;
  return std::max(ll + 2 * lc, (pass == Pass::kFwd ? 2 : 3) * ll);
}

std::vector<BenchRow> run_bench(const BenchOptions& opts) {
  if (opts.repeats < 3) throw UsageError("bench: --repeats must be at least 3");
  if (opts.heads == 0 || opts.seq_len == 0) throw UsageError("bench: heads and L must be positive");
  if (opts.elem_bytes == 0) throw UsageError("bench: elem-bytes must be positive");
  for (std::size_t b : opts.batches)
    if (b == 0) throw UsageError("bench: batch sizes must be positive");
  for (std::size_t c : opts.channels) {
    if (c == 0) throw UsageError("bench: channel counts must be positive");
    if (!opts.chunks.resolve(c)) {
      throw UsageError("bench: chunk rule '" + opts.chunks.to_string() + "' undefined for C=" +
                       std::to_string(c));
    }
  }

  std::vector<BenchRow> rows;
  Rng rng(opts.seed);
  const BatchOptions batch_opts{opts.capacity_bytes, opts.workers};
  for (std::size_t batch : opts.batches) {
    for (std::size_t C : opts.channels) {
      const std::size_t r = *opts.chunks.resolve(C);
      const TileConfig cfg{r, 1.0, opts.elem_bytes};
      const Shape shape{static_cast<Extent>(batch), static_cast<Extent>(opts.heads),
                        static_cast<Extent>(opts.seq_len), static_cast<Extent>(C)};
      const DenseTensor q = fill_uniform(rng, shape, -1.0, 1.0);
      const DenseTensor k = fill_uniform(rng, shape, -1.0, 1.0);
      const DenseTensor v = fill_uniform(rng, shape, -1.0, 1.0);
      const DenseTensor d_out = fill_uniform(rng, shape, -1.0, 1.0);
      const std::uint64_t slices = static_cast<std::uint64_t>(batch) * opts.heads;

      for (Pass pass : opts.passes) {
        BenchRow base{batch, opts.heads, opts.seq_len, C, r, Impl::kFlash, pass, 0, 0, 0};

        TrafficReport traffic;
        BenchRow flash = base;
        flash.elapsed_ns = time_median(opts.repeats, [&] {
          BatchedForwardResult f = batched_flash_forward(q, k, v, cfg, batch_opts);
          traffic = f.report;
          if (pass == Pass::kFwdBwd) {
            BatchedBackwardResult b = batched_flash_backward(f.contexts, d_out, batch_opts);
            traffic.merge(b.report);
          }
        });
        flash.peak_sram_bytes = traffic.peak_sram_bytes;
        flash.total_global_elements = traffic.total_elements();
        rows.push_back(flash);

        BenchRow naive = base;
        naive.impl = Impl::kNaive;
        naive.elapsed_ns = time_median(opts.repeats, [&] {
          for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t h = 0; h < opts.heads; ++h) {
              const DenseTensor qs = slice_matrix(q, b, h), ks = slice_matrix(k, b, h),
                                vs = slice_matrix(v, b, h);
              NaiveForwardResult nf = naive_forward(qs, ks, vs);
              if (pass == Pass::kFwdBwd) {
                (void)naive_backward(qs, ks, vs, nf.cache, slice_matrix(d_out, b, h));
              }
            }
          }
        });
        naive.peak_sram_bytes = naive_peak_elements(opts.seq_len, C, pass) * opts.elem_bytes;
        naive.total_global_elements = naive_global_elements(opts.seq_len, C, pass) * slices;
        rows.push_back(naive);
      }
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const BenchRow& a, const BenchRow& b) { return sort_key(a) < sort_key(b); });
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kBenchCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    os << r.batch << ',' << r.heads << ',' << r.seq_len << ',' << r.channels << ',' << r.chunks
       << ',' << to_string(r.impl) << ',' << to_string(r.pass) << ',' << r.elapsed_ns << ','
       << r.peak_sram_bytes << ',' << r.total_global_elements << '\n';
  }
}

std::vector<BenchRow> parse_bench_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kBenchCsvHeader) {
    throw UsageError("bench csv: missing or unexpected header '" + line + "'");
  }
  std::vector<BenchRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 10) {
      throw UsageError("bench csv: expected 10 fields, got " + std::to_string(f.size()));
    }
    BenchRow r;
    r.batch = parse_field<std::size_t>(f[0], "batch");
    r.heads = parse_field<std::size_t>(f[1], "heads");
    r.seq_len = parse_field<std::size_t>(f[2], "L");
    r.channels = parse_field<std::size_t>(f[3], "C");
    r.chunks = parse_field<std::size_t>(f[4], "r");
    r.impl = parse_impl(f[5]);
    r.pass = parse_pass(f[6]);
    r.elapsed_ns = parse_field<std::int64_t>(f[7], "elapsed_ns");
    r.peak_sram_bytes = parse_field<std::uint64_t>(f[8], "peak_sram_bytes");
    r.total_global_elements = parse_field<std::uint64_t>(f[9], "total_global_elements");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fwattn::harness
