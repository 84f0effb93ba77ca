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

#include "fwattn/harness/check.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "fwattn/error.hpp"
#include "fwattn/flash_attention.hpp"
#include "fwattn/reference_attention.hpp"

namespace fwattn::harness {

namespace {

constexpr double kOracleTol = 1e-10;
constexpr double kFiniteDiffTol = 1e-6;
constexpr double kFiniteDiffStep = 1e-5;

struct Inputs {
  DenseTensor q, k, v, d_out;
};

Inputs make_inputs(std::uint64_t seed, std::size_t L, std::size_t C) {
  Rng rng(seed ^ (static_cast<std::uint64_t>(L) << 32) ^ C);
  const Shape s{static_cast<Extent>(L), static_cast<Extent>(C)};
  Inputs in;
  in.q = fill_uniform(rng, s, -1.0, 1.0);
  in.k = fill_uniform(rng, s, -1.0, 1.0);
  in.v = fill_uniform(rng, s, -1.0, 1.0);
  in.d_out = fill_uniform(rng, s, -1.0, 1.0);
  return in;
}

std::string point_id(const char* kind, std::size_t L, std::size_t C, std::size_t r) {
  return std::string(kind) + "/L=" + std::to_string(L) + ",C=" + std::to_string(C) +
         ",r=" + std::to_string(r);
}

// Instrumented traffic equals the closed form and only L x C operands moved.
bool traffic_matches(const TrafficReport& report, const OperandCounts& loads,
                     const OperandCounts& stores, std::size_t L, std::size_t C) {
  if (report.loads != loads || report.stores != stores) return false;
  return std::all_of(report.operand_extents.begin(), report.operand_extents.end(),
                     [&](const auto& kv) { return kv.second == std::make_pair(L, C); });
}

double max_grad_err(const AttnGradients& a, const AttnGradients& b) {
  return std::max({max_abs_diff(a.dq, b.dq), max_abs_diff(a.dk, b.dk),
                   max_abs_diff(a.dv, b.dv)});
}

template <typename Fn>
SuiteResult timed(std::string id, Fn&& fn) {
  SuiteResult r;
  r.case_id = std::move(id);
  const std::int64_t t0 = monotonic_ns();
  try {
    fn(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.note = std::string("unexpected error: ") + e.what();
  }
  r.elapsed_ns = std::max<std::int64_t>(monotonic_ns() - t0, 1);
  return r;
}

// Expects `fn` to throw CapacityError; anything else fails the case.
template <typename Fn>
void expect_capacity_error(SuiteResult& r, Fn&& fn) {
  try {
    fn();
    r.passed = false;
    r.note = "expected capacity error, kernel ran";
  } catch (const CapacityError& e) {
    r.passed = true;
    r.note = "expected capacity error: " + std::to_string(e.required_bytes()) + " > " +
             std::to_string(e.available_bytes()) + " bytes";
  }
}

struct AttnCaseRunner {
  const CheckGrid& grid;
  std::vector<SuiteResult>& out;

  void run(std::uint64_t seed, std::size_t L, std::size_t C,
           const std::vector<std::size_t>& chunk_counts) {
    const Inputs in = make_inputs(seed, L, C);
    const NaiveForwardResult naive = naive_forward(in.q, in.k, in.v);
    const AttnGradients naive_grads = naive_backward(in.q, in.k, in.v, naive.cache, in.d_out);

    std::vector<DenseTensor> outputs;
    std::vector<AttnGradients> grads;
    for (std::size_t r : chunk_counts) {
      const TileConfig cfg{r, 1.0, grid.elem_bytes};
      const bool fwd_fits = peak_sram_forward(L, C, cfg) <= grid.capacity_bytes;
      const bool bwd_fits = peak_sram_backward(L, C, cfg) <= grid.capacity_bytes;
      FlashContext ctx;

      out.push_back(timed(point_id("fwd", L, C, r), [&](SuiteResult& res) {
        ScratchpadArena arena(grid.capacity_bytes);
        if (!fwd_fits) {
          expect_capacity_error(res, [&] { (void)flash_forward(in.q, in.k, in.v, cfg, arena); });
          // The materializing oracle has no scratchpad limit.
          (void)naive_forward(in.q, in.k, in.v);
          return;
        }
        FlashForwardResult f = flash_forward(in.q, in.k, in.v, cfg, arena);
        res.max_err = max_abs_diff(f.output, naive.output);
        res.traffic_ok = traffic_matches(f.report, expected_forward_loads(L, C),
                                         expected_forward_stores(L, C), L, C);
        res.sram_ok = f.report.peak_sram_bytes == peak_sram_forward(L, C, cfg);
        res.passed = res.max_err <= kOracleTol && res.traffic_ok && res.sram_ok;
        outputs.push_back(std::move(f.output));
        ctx = std::move(f.context);
      }));

      out.push_back(timed(point_id("bwd", L, C, r), [&](SuiteResult& res) {
        if (!ctx.valid()) {
          ScratchpadArena big(peak_sram_forward(L, C, cfg));
          ctx = flash_forward(in.q, in.k, in.v, cfg, big).context;
        }
        ScratchpadArena arena(grid.capacity_bytes);
        if (!bwd_fits) {
          expect_capacity_error(res, [&] { (void)flash_backward(ctx, in.d_out, arena); });
          return;
        }
        FlashBackwardResult b = flash_backward(ctx, in.d_out, arena);
        res.max_err = max_grad_err(b.grads, naive_grads);
        res.traffic_ok = traffic_matches(b.report, expected_backward_loads(L, C),
                                         expected_backward_stores(L, C), L, C);
        res.sram_ok = b.report.peak_sram_bytes == peak_sram_backward(L, C, cfg);
        res.passed = res.max_err <= kOracleTol && res.traffic_ok && res.sram_ok;
        grads.push_back(std::move(b.grads));
      }));
    }

    if (outputs.size() > 1 || grads.size() > 1) {
      out.push_back(timed("rinv/L=" + std::to_string(L) + ",C=" + std::to_string(C),
                          [&](SuiteResult& res) {
                            for (const auto& o : outputs)
                              res.max_err = std::max(res.max_err, max_abs_diff(o, outputs[0]));
                            for (const auto& g : grads)
                              res.max_err = std::max(res.max_err, max_grad_err(g, grads[0]));
                            res.passed = res.max_err <= kOracleTol;
                          }));
    }

    if (L * C <= grid.fd_max_elements && !grads.empty()) {
      out.push_back(timed("grad/L=" + std::to_string(L) + ",C=" + std::to_string(C),
                          [&](SuiteResult& res) {
                            auto loss = [&](const DenseTensor& q, const DenseTensor& k,
                                            const DenseTensor& v) {
                              return inner_product(in.d_out, naive_forward(q, k, v).output);
                            };
                            AttnGradients fd{
                                finite_diff_grad([&](const DenseTensor& x) { return loss(x, in.k, in.v); },
                                                 in.q, kFiniteDiffStep),
                                finite_diff_grad([&](const DenseTensor& x) { return loss(in.q, x, in.v); },
                                                 in.k, kFiniteDiffStep),
                                finite_diff_grad([&](const DenseTensor& x) { return loss(in.q, in.k, x); },
                                                 in.v, kFiniteDiffStep)};
                            res.max_err = std::max(max_grad_err(naive_grads, fd),
                                                   max_grad_err(grads.back(), fd));
                            res.passed = res.max_err <= kFiniteDiffTol;
                          }));
    }
  }
};

std::string window_id(const WindowConfig& w) {
  return "window/" + std::to_string(w.height) + "x" + std::to_string(w.width) + "x" +
         std::to_string(w.channels) + ",k=" + std::to_string(w.window);
}

}  // namespace

CheckGrid CheckGrid::defaults() {
  CheckGrid g;
  g.seq_lens = {1, 2, 8, 49, 64};
  g.channels = {16, 32, 64};
  g.chunk_rules = {ChunkRule::fixed(1), ChunkRule::fixed(2), ChunkRule::fixed(4),
                   ChunkRule::automatic()};
  g.windows = {{224, 224, 3, 7}, {4, 4, 1, 2}, {14, 21, 2, 7}, {8, 8, 4, 8}, {6, 9, 5, 3}};
  return g;
}

std::vector<CheckPoint> CheckGrid::points() const {
  std::vector<CheckPoint> pts;
  for (std::size_t L : seq_lens) {
    for (std::size_t C : channels) {
      std::set<std::size_t> rs;
      for (const ChunkRule& rule : chunk_rules)
        if (auto r = rule.resolve(C)) rs.insert(*r);
      for (std::size_t r : rs) pts.push_back({L, C, r});
    }
  }
  return pts;
}

bool CheckSummary::all_passed() const { return failures() == 0; }

std::size_t CheckSummary::failures() const {
  return static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                [](const SuiteResult& r) { return !r.passed; }));
}

CheckSummary run_check(std::uint64_t seed, const CheckGrid& grid) {
  CheckSummary summary;
  AttnCaseRunner runner{grid, summary.results};

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_shape;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (const CheckPoint& p : grid.points()) {
    auto key = std::make_pair(p.seq_len, p.channels);
    if (!by_shape.count(key)) order.push_back(key);
    by_shape[key].push_back(p.chunks);
  }
  for (const auto& key : order) runner.run(seed, key.first, key.second, by_shape[key]);

  Rng rng(seed);
  for (const WindowConfig& w : grid.windows) {
    summary.results.push_back(timed(window_id(w), [&](SuiteResult& res) {
      w.validate();
      const DenseTensor x = fill_uniform(
          rng,
          Shape{static_cast<Extent>(w.height), static_cast<Extent>(w.width),
                static_cast<Extent>(w.channels)},
          -1.0, 1.0);
      const DenseTensor y = window_partition(x, w);
      const Shape want{static_cast<Extent>(w.num_windows()), static_cast<Extent>(w.seq_len()),
                       static_cast<Extent>(w.channels)};
      res.max_err = max_abs_diff(window_reverse(y, w), x);
      res.passed = y.shape() == want && res.max_err == 0.0;
    }));
  }
  return summary;
}

void print_check_table(std::ostream& os, const CheckSummary& summary, bool with_timings) {
  std::size_t width = 8;
  for (const auto& r : summary.results) width = std::max(width, r.case_id.size());
  char buf[64];
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };

  os << pad("case") << "max_err     traffic sram status";
  if (with_timings) os << "  elapsed_ns";
  os << "\n";
  for (const auto& r : summary.results) {
    std::snprintf(buf, sizeof buf, "%-11.3e ", r.max_err);
    os << pad(r.case_id) << buf << (r.traffic_ok ? "ok      " : "FAIL    ")
       << (r.sram_ok ? "ok   " : "FAIL ") << (r.passed ? "PASS" : "FAIL");
    if (with_timings) os << "  " << r.elapsed_ns;
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
  }
  os << summary.results.size() << " cases, " << summary.failures() << " failed\n";
  for (const auto& r : summary.results)
    if (!r.passed) os << "FAILED: " << r.case_id << "\n";
}

}  // namespace fwattn::harness
