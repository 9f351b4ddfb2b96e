/*
 *
 * Copyright 2026 The HYDRA-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include <gtest/gtest.h>

#include "hydra/bench/bench.hpp"
#include "json.hpp"

namespace hydra::bench {
namespace {

using crypto::MacAlgorithm;

TEST(FitTest, ExactLine) {
  LinearFit f = FitLine({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r2, 1.0);
}

TEST(FitTest, KnownResiduals) {
  // x = 1..5, y = 1, 2, 1.3, 3.75, 2.25: slope 0.425, intercept 0.785,
  // r2 = 0.3929 (numpy polyfit).
  LinearFit f = FitLine({1, 2, 3, 4, 5}, {1, 2, 1.3, 3.75, 2.25});
  EXPECT_NEAR(f.slope, 0.425, 1e-12);
  EXPECT_NEAR(f.intercept, 0.785, 1e-12);
  EXPECT_NEAR(f.r2, 0.392919, 1e-5);
  EXPECT_THROW(FitLine({1}, {1}), Error);
}

TEST(MedianTest, OddAndEven) {
  EXPECT_EQ(Median({5, 1, 3}), 3);
  EXPECT_EQ(Median({4, 1, 3, 2}), 2);
  EXPECT_EQ(Median({}), 0);
}

BenchOptions Quick() {
  BenchOptions o;
  o.repetitions = 3;
  o.warmup = 1;
  return o;
}

TEST(BenchTest, AllAlgorithmsIncludingEmptyInput) {
  std::vector<MacAlgorithm> algs(std::begin(crypto::kAllMacAlgorithms),
                                 std::end(crypto::kAllMacAlgorithms));
  auto rows = MacAlgorithms({0, 4096}, algs, Quick());
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.metric, "mac");
    EXPECT_GE(r.value_ns, 0);
  }
  EXPECT_EQ(rows[0].algorithm, "SPECK_64_128_CBC");
  EXPECT_EQ(rows[0].size_bytes, 0u);
}

TEST(BenchTest, SweepsProduceFits) {
  Sweep s = MacVsMemSize(MacAlgorithm::kHmacSha256, {64 * kKiB, 128 * kKiB, 256 * kKiB}, Quick());
  ASSERT_EQ(s.samples.size(), 3u);
  EXPECT_GT(s.fit.slope, 0);
  Sweep p = MacVsProcesses(MacAlgorithm::kSpeck64_128Cbc, {1, 4}, 16 * kKiB, Quick());
  ASSERT_EQ(p.samples.size(), 2u);
  EXPECT_EQ(p.samples[1].processes, 4u);
  EXPECT_GT(p.samples[1].value_ns, p.samples[0].value_ns);
}

TEST(BenchTest, BreakdownHasThreePhases) {
  Breakdown b = PhaseBreakdown(MacAlgorithm::kSpeck64_128Cbc, 64 * kKiB, Quick());
  ASSERT_EQ(b.samples.size(), 3u);
  EXPECT_NEAR(b.share(b.verify_request_ns) + b.share(b.retrieve_mem_ns) + b.share(b.mac_mem_ns),
              1.0, 1e-9);
  EXPECT_GT(b.mac_mem_ns, b.verify_request_ns);
}

TEST(BenchTest, CsvAndJson) {
  Report report;
  report.Add(std::vector<Sample>{{"X", 10, 2, "mac", 99}});
  EXPECT_EQ(ToCsv(report.samples), "algorithm,size_bytes,processes,metric,value_ns\nX,10,2,mac,99\n");
  report.Add(Sweep{"Y", "size_bytes", {{"Y", 1, 1, "mac_mem", 5}}, {1, 2, 0.5}});
  auto doc = nlohmann::json::parse(ToJson(report));
  EXPECT_EQ(doc["samples"].size(), 2u);
  EXPECT_EQ(doc["fits"][0]["r2"], 0.5);
  EXPECT_EQ(doc["breakdowns"].size(), 0u);
}

}  // namespace
}  // namespace hydra::bench
