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

#include "fwattn/harness/cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>

#include "fwattn/error.hpp"
#include "fwattn/harness/bench.hpp"
#include "fwattn/harness/check.hpp"
#include "fwattn/harness/demo.hpp"
#include "fwattn/harness/traffic.hpp"

namespace fwattn::harness {

namespace {

// "none" and the empty string both mean an empty list.
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  if (text == "none") return items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, end - start);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) items.push_back(std::move(item));
    start = end + 1;
  }
  return items;
}

std::size_t parse_positive(const std::string& text, const char* flag) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || v == 0) {
    throw UsageError(std::string(flag) + ": expected a positive integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) out.push_back(parse_positive(item, flag));
  return out;
}

// "HxWxC:k", e.g. 224x224x3:7.
WindowConfig parse_window(const std::string& text) {
  const auto colon = text.find(':');
  const auto x1 = text.find('x');
  const auto x2 = x1 == std::string::npos ? x1 : text.find('x', x1 + 1);
  if (colon == std::string::npos || x2 == std::string::npos || x2 > colon) {
    throw UsageError("--windows: expected HxWxC:k, got '" + text + "'");
  }
  return {parse_positive(text.substr(0, x1), "--windows"),
          parse_positive(text.substr(x1 + 1, x2 - x1 - 1), "--windows"),
          parse_positive(text.substr(x2 + 1, colon - x2 - 1), "--windows"),
          parse_positive(text.substr(colon + 1), "--windows")};
}

struct GlobalFlags {
  std::uint64_t seed = 42;
  std::uint64_t capacity_bytes = ScratchpadArena::kDefaultCapacityBytes;
  std::size_t elem_bytes = 4;
  std::string out_path;
  std::size_t repeats = 3;
  std::size_t workers = 1;
};

// Writes to --out when given, otherwise to the default stream.
int with_output(const GlobalFlags& g, std::ostream& fallback,
                const std::function<int(std::ostream&)>& body) {
  if (g.out_path.empty()) return body(fallback);
  std::ofstream file(g.out_path, std::ios::binary);
  if (!file) throw UsageError("--out: cannot open '" + g.out_path + "' for writing");
  return body(file);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feature-tiled window attention: correctness, traffic and benchmark harness",
               "fwattn"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Seed of the input generator")->capture_default_str();
  app.add_option("--capacity-bytes", g.capacity_bytes, "Scratchpad capacity per worker")
      ->capture_default_str();
  app.add_option("--elem-bytes", g.elem_bytes, "Bytes per element for accounting")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "Write the table/CSV to this file instead of stdout");
  app.add_option("--repeats", g.repeats, "Timed repeats per benchmark row (>= 3)")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads for batched kernels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // check
  std::string check_L = "1,2,8,49,64", check_C = "16,32,64", check_r = "1,2,4,auto";
  std::string check_windows = "224x224x3:7,4x4x1:2,14x21x2:7,8x8x4:8,6x9x5:3";
  bool check_timings = false;
  auto* check = app.add_subcommand("check", "Run the oracle, gradient, traffic and "
                                            "occupancy suites over a shape grid");
  check->add_option("--L", check_L, "Comma-separated sequence lengths, or none")
      ->capture_default_str();
  check->add_option("--C", check_C, "Comma-separated channel counts")->capture_default_str();
  check->add_option("--r", check_r, "Comma-separated chunk counts or 'auto' (C/16)")
      ->capture_default_str();
  check->add_option("--windows", check_windows, "Comma-separated HxWxC:k window geometries, or none")
      ->capture_default_str();
  check->add_flag("--timings", check_timings, "Add per-case elapsed_ns to the table");

  // traffic
  std::size_t traffic_L = 64, traffic_C = 64;
  std::string traffic_r = "auto";
  auto* traffic = app.add_subcommand("traffic", "Report global traffic and scratchpad peaks");
  traffic->add_option("--L", traffic_L, "Sequence length")->capture_default_str();
  traffic->add_option("--C", traffic_C, "Channels")->capture_default_str();
  traffic->add_option("--r", traffic_r, "Chunk count or 'auto'")->capture_default_str();

  // bench
  std::string bench_batch = "16,64", bench_C = "64,256", bench_r = "auto", bench_pass = "fwd";
  std::size_t bench_heads = 4, bench_L = 64;
  auto* bench = app.add_subcommand("bench", "Time naive vs flash attention, CSV output");
  bench->add_option("--batch", bench_batch, "Comma-separated window counts")
      ->capture_default_str();
  bench->add_option("--heads", bench_heads, "Heads per window")->capture_default_str();
  bench->add_option("--L", bench_L, "Sequence length")->capture_default_str();
  bench->add_option("--C", bench_C, "Comma-separated channel counts")->capture_default_str();
  bench->add_option("--r", bench_r, "Chunk count or 'auto'")->capture_default_str();
  bench->add_option("--pass", bench_pass, "fwd, fwd_bwd or both")
      ->check(CLI::IsMember({"fwd", "fwd_bwd", "both"}))
      ->capture_default_str();

  // demo
  DemoOptions demo_opts;
  std::string demo_r = "auto";
  auto* demo = app.add_subcommand("demo", "Partition an image, run window attention, reverse");
  demo->add_option("--H", demo_opts.geometry.height, "Image height")->capture_default_str();
  demo->add_option("--W", demo_opts.geometry.width, "Image width")->capture_default_str();
  demo->add_option("--C", demo_opts.geometry.channels, "Channels")->capture_default_str();
  demo->add_option("--k", demo_opts.geometry.window, "Window side")->capture_default_str();
  demo->add_option("--r", demo_r, "Chunk count or 'auto'")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) {
      CheckGrid grid;
      grid.seq_lens = parse_sizes(check_L, "--L");
      grid.channels = parse_sizes(check_C, "--C");
      for (const auto& item : split_list(check_r)) grid.chunk_rules.push_back(ChunkRule::parse(item));
      for (const auto& item : split_list(check_windows)) grid.windows.push_back(parse_window(item));
      grid.capacity_bytes = g.capacity_bytes;
      grid.elem_bytes = g.elem_bytes;
      const CheckSummary summary = run_check(g.seed, grid);
      return with_output(g, out, [&](std::ostream& os) {
        print_check_table(os, summary, check_timings);
        return summary.all_passed() ? kExitOk : kExitCheckFailed;
      });
    }
    if (traffic->parsed()) {
      TrafficOptions opts{traffic_L, traffic_C, ChunkRule::parse(traffic_r), g.elem_bytes,
                          g.capacity_bytes, g.seed};
      const TrafficOutcome o = run_traffic(opts);
      print_traffic_text(out, opts, o);
      const int status = o.matches_closed_form(opts.seq_len, opts.channels) ? kExitOk
                                                                            : kExitCheckFailed;
      if (g.out_path.empty()) out << "\n";
      with_output(g, out, [&](std::ostream& os) {
        write_traffic_csv(os, opts, o);
        return 0;
      });
      return status;
    }
    if (bench->parsed()) {
      BenchOptions opts;
      opts.batches = parse_sizes(bench_batch, "--batch");
      opts.heads = bench_heads;
      opts.seq_len = bench_L;
      opts.channels = parse_sizes(bench_C, "--C");
      opts.chunks = ChunkRule::parse(bench_r);
      opts.passes = bench_pass == "both" ? std::vector<Pass>{Pass::kFwd, Pass::kFwdBwd}
                                         : std::vector<Pass>{parse_pass(bench_pass)};
      opts.repeats = g.repeats;
      opts.seed = g.seed;
      opts.elem_bytes = g.elem_bytes;
      opts.capacity_bytes = g.capacity_bytes;
      opts.workers = g.workers;
      const std::vector<BenchRow> rows = run_bench(opts);
      return with_output(g, out, [&](std::ostream& os) {
        write_bench_csv(os, rows);
        return kExitOk;
      });
    }
    if (demo->parsed()) {
      demo_opts.chunks = ChunkRule::parse(demo_r);
      demo_opts.elem_bytes = g.elem_bytes;
      demo_opts.capacity_bytes = g.capacity_bytes;
      demo_opts.seed = g.seed;
      demo_opts.workers = g.workers;
      const DemoOutcome o = run_demo(demo_opts);
      return with_output(g, out, [&](std::ostream& os) {
        print_demo_summary(os, demo_opts, o);
        return kExitOk;
      });
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace fwattn::harness
