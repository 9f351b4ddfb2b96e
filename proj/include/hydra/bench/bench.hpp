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

#ifndef HYDRA_BENCH_BENCH_HPP_
#define HYDRA_BENCH_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hydra/crypto/mac.hpp"

namespace hydra::bench {

// One CSV row: algorithm,size_bytes,processes,metric,value_ns
struct Sample {
  std::string algorithm;
  std::uint64_t size_bytes = 0;
  std::uint32_t processes = 0;
  std::string metric;
  std::int64_t value_ns = 0;
};

struct BenchOptions {
  int repetitions = 30;
  int warmup = 2;
  std::uint64_t seed = 1;
};

// Ordinary least squares y = slope * x + intercept.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

LinearFit FitLine(const std::vector<double>& x, const std::vector<double>& y);

std::int64_t Median(std::vector<std::int64_t> values);

struct Sweep {
  std::string algorithm;
  // "size_bytes" or "processes"
  std::string variable;
  std::vector<Sample> samples;
  LinearFit fit;
};

struct Breakdown {
  std::string algorithm;
  std::uint64_t size_bytes = 0;
  double verify_request_ns = 0;
  double retrieve_mem_ns = 0;
  double mac_mem_ns = 0;
  std::vector<Sample> samples;

  double total_ns() const { return verify_request_ns + retrieve_mem_ns + mac_mem_ns; }
  double share(double phase_ns) const { return total_ns() > 0 ? phase_ns / total_ns() : 0; }
};

// Raw MAC throughput over random data, no platform involved. Metric "mac".
std::vector<Sample> MacAlgorithms(const std::vector<std::uint64_t>& sizes,
                                  const std::vector<crypto::MacAlgorithm>& algorithms,
                                  const BenchOptions& options);

// MacMem of full attestation runs over a growing range of one process.
Sweep MacVsMemSize(crypto::MacAlgorithm algorithm, const std::vector<std::uint64_t>& sizes,
                   const BenchOptions& options);

// MacMem over a fixed-size target while `count` user processes share the
// attestation process's (maximum) priority.
Sweep MacVsProcesses(crypto::MacAlgorithm algorithm, const std::vector<std::uint32_t>& counts,
                     std::uint64_t target_size, const BenchOptions& options);

Breakdown PhaseBreakdown(crypto::MacAlgorithm algorithm, std::uint64_t size,
                         const BenchOptions& options);

struct Report {
  std::vector<Sample> samples;
  std::vector<Sweep> sweeps;
  std::vector<Breakdown> breakdowns;

  void Add(const std::vector<Sample>& more);
  void Add(const Sweep& sweep);
  void Add(const Breakdown& breakdown);
};

std::string ToCsv(const std::vector<Sample>& samples);
std::string ToJson(const Report& report);

inline constexpr std::uint64_t kMiB = 1024 * 1024;
inline constexpr std::uint64_t kKiB = 1024;

}  // namespace hydra::bench

#endif  // HYDRA_BENCH_BENCH_HPP_
