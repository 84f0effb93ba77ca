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

#include <cstdio>
#include <fstream>
#include <set>
#include <tuple>
#include <sstream>

#include "fwattn/error.hpp"
#include "fwattn/harness/bench.hpp"
#include "fwattn/harness/check.hpp"
#include "fwattn/harness/cli.hpp"
#include "fwattn/harness/demo.hpp"
#include "fwattn/harness/traffic.hpp"

namespace fwattn::harness {
namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

TEST(ChunkRuleTest, ParseAndResolve) {
  EXPECT_TRUE(ChunkRule::parse("auto").is_auto);
  EXPECT_EQ(ChunkRule::parse("4").value, 4u);
  EXPECT_THROW(ChunkRule::parse("0"), UsageError);
  EXPECT_THROW(ChunkRule::parse("x"), UsageError);
  EXPECT_THROW(ChunkRule::parse("4x"), UsageError);
  EXPECT_EQ(ChunkRule::automatic().resolve(256), 16u);
  EXPECT_FALSE(ChunkRule::automatic().resolve(4).has_value());
  EXPECT_FALSE(ChunkRule::fixed(8).resolve(4).has_value());
  EXPECT_EQ(ChunkRule::fixed(3).resolve(10), 3u);
}

TEST(CheckTest, DefaultGridPasses) {
  const CheckSummary s = run_check(42, CheckGrid::defaults());
  EXPECT_TRUE(s.all_passed());
  EXPECT_GT(s.results.size(), 100u);
  std::set<std::string> ids;
  for (const auto& r : s.results) {
    EXPECT_TRUE(ids.insert(r.case_id).second) << "duplicate " << r.case_id;
    EXPECT_GE(r.max_err, 0.0);
    EXPECT_GT(r.elapsed_ns, 0);
  }
}

TEST(CheckTest, GridExpansionSkipsUndefinedRules) {
  CheckGrid g;
  g.seq_lens = {8};
  g.channels = {4, 32};
  g.chunk_rules = {ChunkRule::fixed(2), ChunkRule::fixed(8), ChunkRule::automatic()};
  const auto pts = g.points();
  // C=4: r=2 only. C=32: r=2, r=8, auto=2 (dup).
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].chunks, 2u);
  EXPECT_EQ(pts[2].chunks, 8u);
}

TEST(CheckTest, EmptyGridIsVacuousPass) {
  const CheckSummary s = run_check(1, CheckGrid{});
  EXPECT_TRUE(s.results.empty());
  EXPECT_TRUE(s.all_passed());
}

TEST(CheckTest, LargeWindowReportsExpectedCapacityError) {
  CheckGrid g;
  g.seq_lens = {1024};
  g.channels = {32};
  g.chunk_rules = {ChunkRule::fixed(2)};
  const CheckSummary s = run_check(42, g);
  ASSERT_EQ(s.results.size(), 2u);
  for (const auto& r : s.results) {
    EXPECT_TRUE(r.passed) << r.case_id;
    EXPECT_NE(r.note.find("expected capacity error"), std::string::npos);
  }
}

TEST(CheckTest, IsDeterministic) {
  CheckGrid g = CheckGrid::defaults();
  g.seq_lens = {2, 8};
  std::ostringstream a, b;
  print_check_table(a, run_check(7, g));
  print_check_table(b, run_check(7, g));
  EXPECT_EQ(a.str(), b.str());
}

TEST(TrafficTest, Width16Peaks) {
  TrafficOptions o;
  o.seq_len = 64;
  o.channels = 64;
  o.chunks = ChunkRule::fixed(4);
  o.elem_bytes = 4;
  const TrafficOutcome t = run_traffic(o);
  EXPECT_EQ(t.forward.peak_sram_bytes, 24576u);
  EXPECT_EQ(t.backward.peak_sram_bytes, 40960u);
  EXPECT_TRUE(t.matches_closed_form(64, 64));
}

TEST(TrafficTest, MaximalTiling) {
  TrafficOptions o;
  o.seq_len = 64;
  o.channels = 64;
  o.chunks = ChunkRule::fixed(64);
  const TrafficOutcome t = run_traffic(o);
  EXPECT_EQ(t.chunk_width, 1u);
  EXPECT_EQ(t.forward.peak_sram_bytes, (64u * 64 + 2 * 64) * 4);
}

TEST(TrafficTest, CsvHasOneRowPerOperand) {
  TrafficOptions o;
  o.seq_len = 49;
  o.channels = 32;
  o.chunks = ChunkRule::fixed(2);
  const TrafficOutcome t = run_traffic(o);
  EXPECT_TRUE(t.matches_closed_form(49, 32));
  std::ostringstream csv;
  write_traffic_csv(csv, o, t);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "pass,operand,loads,stores,load_bytes,store_bytes,expected_loads,expected_stores");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4 + 7);
  EXPECT_NE(csv.str().find("fwd,Q,1568,0,6272,0,1568,0\n"), std::string::npos);
  EXPECT_NE(csv.str().find("bwd,K,3136,0,12544,0,3136,0\n"), std::string::npos);
}

TEST(TrafficTest, Errors) {
  TrafficOptions o;
  o.channels = 24;  // auto undefined
  EXPECT_THROW(run_traffic(o), UsageError);
  o.channels = 32;
  o.seq_len = 1024;
  EXPECT_THROW(run_traffic(o), CapacityError);
}

BenchOptions tiny_bench() {
  BenchOptions o;
  o.batches = {2};
  o.heads = 2;
  o.seq_len = 16;
  o.channels = {32};
  o.repeats = 3;
  return o;
}

TEST(BenchTest, OneConfigGivesTwoRows) {
  const auto rows = run_bench(tiny_bench());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].impl, Impl::kFlash);
  EXPECT_EQ(rows[1].impl, Impl::kNaive);
  for (const auto& r : rows) {
    EXPECT_GT(r.elapsed_ns, 0);
    EXPECT_GT(r.peak_sram_bytes, 0u);
    EXPECT_EQ(r.chunks, 2u);
  }
  EXPECT_EQ(rows[0].total_global_elements, 4u * 16 * 32 * 2 * 2);
  EXPECT_EQ(rows[0].peak_sram_bytes, (16u * 16 + 2 * 16 * 16) * 4);
  EXPECT_EQ(rows[1].total_global_elements, (4u * 16 * 32 + 4 * 16 * 16) * 4);
}

TEST(BenchTest, FwdBwdTotalsAndSortedOrder) {
  BenchOptions o = tiny_bench();
  o.batches = {3, 1};
  o.channels = {32, 16};
  o.passes = {Pass::kFwdBwd, Pass::kFwd};
  const auto rows = run_bench(o);
  ASSERT_EQ(rows.size(), 2u * 2 * 2 * 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    EXPECT_LE(std::tie(a.batch, a.channels), std::tie(b.batch, b.channels));
  }
  for (const auto& r : rows) {
    if (r.impl != Impl::kFlash) continue;
    const std::uint64_t lc = 16u * r.channels * r.batch * r.heads;
    EXPECT_EQ(r.total_global_elements, (r.pass == Pass::kFwd ? 4 : 13) * lc);
  }
}

TEST(BenchTest, CsvSchemaRoundTrip) {
  const auto rows = run_bench(tiny_bench());
  std::stringstream csv;
  write_bench_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "batch,heads,L,C,r,impl,pass,elapsed_ns,peak_sram_bytes,total_global_elements");
  EXPECT_EQ(parse_bench_csv(csv), rows);
  std::istringstream bad("batch,heads\n1,2\n");
  EXPECT_THROW(parse_bench_csv(bad), UsageError);
}

TEST(BenchTest, Errors) {
  BenchOptions o = tiny_bench();
  o.repeats = 2;
  EXPECT_THROW(run_bench(o), UsageError);
  o = tiny_bench();
  o.channels = {24};
  EXPECT_THROW(run_bench(o), UsageError);
  o = tiny_bench();
  o.batches = {0};
  EXPECT_THROW(run_bench(o), UsageError);
}

TEST(NaiveModelTest, ClosedForms) {
  EXPECT_EQ(naive_global_elements(64, 64, Pass::kFwd), 4u * 4096 + 4 * 4096);
  EXPECT_EQ(naive_global_elements(2, 3, Pass::kFwdBwd), 12u * 6 + 11 * 4);
  EXPECT_EQ(naive_peak_elements(64, 16, Pass::kFwd), 2u * 4096);
  EXPECT_EQ(naive_peak_elements(64, 256, Pass::kFwd), 4096u + 2 * 64 * 256);
  EXPECT_EQ(naive_peak_elements(64, 16, Pass::kFwdBwd), 3u * 4096);
}

TEST(DemoTest, Image224Geometry) {
  DemoOptions o;
  o.geometry = {224, 224, 32, 7};
  const DemoOutcome d = run_demo(o);
  EXPECT_EQ(d.windows_shape, Shape({1024, 49, 32}));
  EXPECT_EQ(d.output_shape, Shape({224, 224, 32}));
  EXPECT_EQ(d.chunks, 2u);
  EXPECT_LE(d.max_oracle_err, 1e-10);
  EXPECT_EQ(d.round_trip_err, 0.0);
  EXPECT_EQ(d.traffic.load_count("Q"), 1024u * 49 * 32);
}

TEST(DemoTest, SingleWindowAndErrors) {
  DemoOptions o;
  o.geometry = {8, 8, 5, 8};
  const DemoOutcome d = run_demo(o);
  EXPECT_EQ(d.windows_shape, Shape({1, 64, 5}));
  EXPECT_EQ(d.chunks, 1u);
  EXPECT_LE(d.max_oracle_err, 1e-10);
  o.geometry = {10, 8, 5, 4};
  EXPECT_THROW(run_demo(o), UsageError);
  o.geometry = {8, 8, 5, 4};
  o.chunks = ChunkRule::fixed(6);
  EXPECT_THROW(run_demo(o), UsageError);
}

TEST(CliTest, CheckExitCodes) {
  CliRun r = cli({"check", "--L", "2,8", "--C", "16", "--windows", "4x4x1:2"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0 failed"), std::string::npos);

  r = cli({"check", "--L", "", "--windows", ""});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("0 cases, 0 failed"), std::string::npos);

  r = cli({"check", "--L", "1024", "--C", "32", "--r", "2", "--windows", ""});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("expected capacity error"), std::string::npos);

  r = cli({"check", "--L", "none", "--windows", "none"});
  EXPECT_NE(r.out.find("0 cases, 0 failed"), std::string::npos);

  r = cli({"check", "--L", "abc"});
  EXPECT_EQ(r.status, kExitUsage);
  r = cli({"check", "--windows", "4x4:2"});
  EXPECT_EQ(r.status, kExitUsage);
}

TEST(CliTest, TinyCapacityIsExpectedPath) {
  // Every kernel exceeds a zero-byte scratchpad, so each case must report the
  // capacity error rather than run.
  const CliRun r = cli({"check", "--L", "2", "--C", "16", "--r", "1", "--windows", "",
                        "--capacity-bytes", "0"});
  EXPECT_EQ(r.status, kExitOk) << r.out;
  EXPECT_NE(r.out.find("expected capacity error"), std::string::npos);
}

TEST(CliTest, GlobalFlagsAfterSubcommand) {
  const CliRun a = cli({"check", "--seed", "9", "--L", "8", "--C", "16", "--windows", ""});
  const CliRun b = cli({"--seed", "9", "check", "--L", "8", "--C", "16", "--windows", ""});
  EXPECT_EQ(a.status, kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, TrafficOutput) {
  CliRun r = cli({"traffic", "--L", "64", "--C", "64", "--r", "4", "--elem-bytes", "4"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("peak scratchpad: 24576 B"), std::string::npos);
  EXPECT_NE(r.out.find("peak scratchpad: 40960 B"), std::string::npos);
  EXPECT_NE(r.out.find("fwd,O,0,4096,0,16384,0,4096"), std::string::npos);

  r = cli({"traffic", "--elem-bytes", "2"});
  EXPECT_EQ(r.status, kExitUsage);
  r = cli({"traffic", "--C", "24"});
  EXPECT_EQ(r.status, kExitUsage);
  r = cli({"traffic", "--L", "1024", "--C", "32", "--r", "2"});
  EXPECT_EQ(r.status, kExitCheckFailed);
  EXPECT_NE(r.err.find("capacity"), std::string::npos);
}

TEST(CliTest, BenchToFile) {
  const std::string path = ::testing::TempDir() + "fwattn_bench.csv";
  CliRun r = cli({"bench", "--batch", "1", "--heads", "1", "--L", "8", "--C", "16",
                  "--repeats", "3", "--out", path});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto rows = parse_bench_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  std::remove(path.c_str());

  EXPECT_EQ(cli({"bench", "--repeats", "2"}).status, kExitUsage);
  EXPECT_EQ(cli({"bench", "--pass", "bwd"}).status, kExitUsage);
  EXPECT_EQ(cli({"bench", "--batch", "0"}).status, kExitUsage);
}

TEST(CliTest, DemoAndUsage) {
  CliRun r = cli({"demo", "--H", "14", "--W", "21", "--C", "16", "--k", "7"});
  EXPECT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("windows [6x49x16]"), std::string::npos);
  EXPECT_NE(r.out.find("round-trip max_abs_diff: 0"), std::string::npos);

  EXPECT_EQ(cli({"demo", "--H", "10", "--k", "7"}).status, kExitUsage);
  EXPECT_EQ(cli({}).status, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).status, kExitUsage);
  EXPECT_EQ(cli({"--help"}).status, kExitOk);
}

}  // namespace
}  // namespace fwattn::harness
