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

// Timing experiments. CSV on stdout by default.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hydra/bench/bench.hpp"

namespace {

using hydra::bench::kMiB;
using hydra::crypto::MacAlgorithm;

std::vector<MacAlgorithm> ParseAlgorithms(const std::vector<std::string>& names) {
  std::vector<MacAlgorithm> out;
  if (names.empty()) {
    out.assign(std::begin(hydra::crypto::kAllMacAlgorithms),
               std::end(hydra::crypto::kAllMacAlgorithms));
  }
  for (const auto& n : names) {
    auto alg = hydra::crypto::ParseMacAlgorithm(n);
    if (!alg) throw std::invalid_argument("unknown MAC " + n);
    out.push_back(*alg);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HYDRA benchmarks"};
  app.require_subcommand(1);
  hydra::bench::BenchOptions options;
  std::vector<std::string> algorithm_names;
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint32_t> counts{1, 2, 4, 8, 16, 32};
  std::uint64_t size = kMiB;
  bool json = false;
  std::string out_path;

  app.add_option("--reps", options.repetitions, "Timed repetitions per point")->check(CLI::PositiveNumber);
  app.add_option("--warmup", options.warmup, "Untimed runs per point");
  app.add_option("--seed", options.seed, "Seed for memory contents");
  app.add_option("-a,--algorithm", algorithm_names, "MAC algorithm(s), default all")->delimiter(',');
  app.add_flag("--json", json, "JSON output with fits and breakdowns");
  app.add_option("-o,--out", out_path, "Write to a file instead of stdout");

  auto* mac = app.add_subcommand("mac", "Raw MAC time over random buffers");
  mac->add_option("--sizes", sizes, "Buffer sizes in bytes")->delimiter(',');
  auto* mem = app.add_subcommand("mem", "Attestation MacMem against range size");
  mem->add_option("--sizes", sizes, "Range sizes in bytes (default 1..10 MiB)")->delimiter(',');
  auto* procs = app.add_subcommand("procs", "Attestation MacMem against process count");
  procs->add_option("--counts", counts, "Process counts")->delimiter(',');
  procs->add_option("--size", size, "Attested range size in bytes");
  auto* phases = app.add_subcommand("breakdown", "VerifyRequest / RetrieveMem / MacMem split");
  phases->add_option("--size", size, "Attested range size in bytes");
  CLI11_PARSE(app, argc, argv);

  try {
    auto algorithms = ParseAlgorithms(algorithm_names);
    hydra::bench::Report report;
    if (*mac) {
      if (sizes.empty()) sizes = {0, 1024, 64 * 1024, kMiB, 10 * kMiB};
      report.Add(hydra::bench::MacAlgorithms(sizes, algorithms, options));
    } else if (*mem) {
      if (sizes.empty()) {
        for (std::uint64_t m = 1; m <= 10; ++m) sizes.push_back(m * kMiB);
      }
      for (auto alg : algorithms) report.Add(hydra::bench::MacVsMemSize(alg, sizes, options));
    } else if (*procs) {
      for (auto alg : algorithms) {
        report.Add(hydra::bench::MacVsProcesses(alg, counts, size, options));
      }
    } else {
      for (auto alg : algorithms) report.Add(hydra::bench::PhaseBreakdown(alg, size, options));
    }

    std::string text = json ? hydra::bench::ToJson(report) + "\n" : hydra::bench::ToCsv(report.samples);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(out_path) << text;
    }
    if (!json) {
      for (const auto& s : report.sweeps) {
        std::cerr << s.algorithm << " vs " << s.variable << ": slope " << s.fit.slope
                  << " ns, r2 " << s.fit.r2 << "\n";
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "hydra-bench: " << e.what() << "\n";
    return 1;
  }
}
