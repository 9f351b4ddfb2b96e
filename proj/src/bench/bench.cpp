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

#include "hydra/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hydra/sim/testbed.hpp"
#include "json.hpp"

namespace hydra::bench {
namespace {

using Clock = std::chrono::steady_clock;
using crypto::MacAlgorithm;

std::int64_t Ns(std::chrono::nanoseconds d) { return static_cast<std::int64_t>(d.count()); }

std::string Name(MacAlgorithm a) { return std::string(crypto::MacAlgorithmName(a)); }

// Issues authenticated requests against a testbed, keeping the device
// clock and the request timestamps in step.
class Driver {
 public:
  explicit Driver(sim::Testbed& tb) : tb_(tb) {}

  const attest::PhaseTimings& Attest(platform::ProcessId pid, std::uint64_t first,
                                     std::uint64_t last) {
    tb_.counter->Advance(1);
    proto::RequestHeader h{tb_.counter->NowMs(), pid.value, first, last};
    attest::AttestOutcome out = tb_.device->HandleRequest(proto::BuildRequest(tb_.keys, h));
    if (!std::holds_alternative<proto::AttestationReport>(out)) {
      throw Error(ErrorCode::kInvalidInput, "benchmark request was not served");
    }
    return tb_.device->attestation().last_timings();
  }

 private:
  sim::Testbed& tb_;
};

sim::TestbedOptions BaseOptions(MacAlgorithm algorithm, std::uint64_t seed) {
  sim::TestbedOptions o;
  o.mac = crypto::MacSpec::Default(algorithm);
  o.seed = seed;
  o.clock_start_ms = 1'000;
  o.persist_interval_ms = 1'000'000;
  return o;
}

Bytes Payload(std::uint64_t seed, std::uint64_t size) {
  return sim::SeededBytes(seed, static_cast<std::size_t>(size));
}

}  // namespace

LinearFit FitLine(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "need at least two points to fit");
  }
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::int64_t Median(std::vector<std::int64_t> values) {
  if (values.empty()) return 0;
  auto mid = values.begin() + values.size() / 2;
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  std::int64_t hi = *mid;
  std::int64_t lo = *std::max_element(values.begin(), mid);
  return lo + (hi - lo) / 2;
}

std::vector<Sample> MacAlgorithms(const std::vector<std::uint64_t>& sizes,
                                  const std::vector<MacAlgorithm>& algorithms,
                                  const BenchOptions& options) {
  std::vector<Sample> rows;
  for (MacAlgorithm alg : algorithms) {
    crypto::MacSpec spec = crypto::MacSpec::Default(alg);
    crypto::MacKey key(alg, Payload(options.seed ^ 0x4b, crypto::MacKeySize(alg)));
    for (std::uint64_t size : sizes) {
      Bytes data = Payload(options.seed, size);
      std::vector<std::int64_t> times;
      for (int i = 0; i < options.warmup + options.repetitions; ++i) {
        auto t0 = Clock::now();
        Bytes tag = crypto::ComputeMac(spec, key, data);
        auto t1 = Clock::now();
        if (tag.empty()) throw Error(ErrorCode::kInvalidInput, "empty tag");
        if (i >= options.warmup) times.push_back(Ns(t1 - t0));
      }
      rows.push_back({Name(alg), size, 0, "mac", Median(times)});
    }
  }
  return rows;
}

Sweep MacVsMemSize(MacAlgorithm algorithm, const std::vector<std::uint64_t>& sizes,
                   const BenchOptions& options) {
  if (sizes.empty()) throw Error(ErrorCode::kInvalidInput, "no sizes");
  std::uint64_t largest = *std::max_element(sizes.begin(), sizes.end());
  sim::TestbedOptions o = BaseOptions(algorithm, options.seed);
  o.processes = {{"target", Payload(options.seed, largest), 100}};
  sim::Testbed tb = sim::MakeTestbed(o);
  tb.device->kernel().set_trace_enabled(false);
  Driver driver(tb);

  Sweep sweep{Name(algorithm), "size_bytes", {}, {}};
  std::vector<double> xs, ys;
  for (std::uint64_t size : sizes) {
    if (size == 0) throw Error(ErrorCode::kInvalidInput, "attested range must be non-empty");
    std::vector<std::int64_t> times;
    for (int i = 0; i < options.warmup + options.repetitions; ++i) {
      const auto& t = driver.Attest(tb.user(0), 0, size - 1);
      if (i >= options.warmup) times.push_back(Ns(t.mac_memory));
    }
    std::int64_t median = Median(times);
    sweep.samples.push_back({sweep.algorithm, size, 1, "mac_mem", median});
    xs.push_back(static_cast<double>(size));
    ys.push_back(static_cast<double>(median));
  }
  if (xs.size() >= 2) sweep.fit = FitLine(xs, ys);
  return sweep;
}

Sweep MacVsProcesses(MacAlgorithm algorithm, const std::vector<std::uint32_t>& counts,
                     std::uint64_t target_size, const BenchOptions& options) {
  Sweep sweep{Name(algorithm), "processes", {}, {}};
  std::vector<double> xs, ys;
  for (std::uint32_t count : counts) {
    if (count == 0) throw Error(ErrorCode::kInvalidInput, "need at least the target process");
    sim::TestbedOptions o = BaseOptions(algorithm, options.seed);
    Bytes target = Payload(options.seed, target_size);
    // Room for the target and one page per peer.
    o.user_frames = sim::FramesFor({{"target", target, 0}},
                                   sim::AttestCodeFor(options.seed).size()) + count;
    sim::Testbed tb = sim::MakeTestbed(o);
    platform::Kernel& k = tb.device->kernel();
    k.set_trace_enabled(false);
    platform::ProcessId root = k.initial_process();
    // Everyone, the target included, at the attestation process's priority.
    std::vector<platform::ProcessId> peers{
        k.Spawn(root, "target", target, platform::kMaxPriority, {})};
    for (std::uint32_t i = 1; i < count; ++i) {
      peers.push_back(k.Spawn(root, "peer", Payload(options.seed + i, platform::kPageSize),
                              platform::kMaxPriority, {}));
    }
    // A time slice of work: checksum a page of one's own image.
    for (platform::ProcessId pid : peers) {
      k.SetBehavior(pid, [](platform::Kernel& kernel, platform::ProcessId self) {
        Bytes page = kernel.ReadVirtual(self, platform::kImageBase, platform::kPageSize);
        std::uint32_t sum = 0;
        for (std::uint8_t b : page) sum = sum * 31 + b;
        page[0] = static_cast<std::uint8_t>(sum);
        kernel.WriteVirtual(self, platform::kImageBase + platform::kPageSize - 1,
                            ByteView(page).first(1));
      });
    }
    Driver driver(tb);
    std::vector<std::int64_t> times;
    for (int i = 0; i < options.warmup + options.repetitions; ++i) {
      const auto& t = driver.Attest(peers[0], 0, target_size - 1);
      if (i >= options.warmup) times.push_back(Ns(t.mac_memory));
    }
    std::int64_t median = Median(times);
    sweep.samples.push_back({sweep.algorithm, target_size, count, "mac_mem", median});
    xs.push_back(count);
    ys.push_back(static_cast<double>(median));
  }
  if (xs.size() >= 2) sweep.fit = FitLine(xs, ys);
  return sweep;
}

Breakdown PhaseBreakdown(MacAlgorithm algorithm, std::uint64_t size,
                         const BenchOptions& options) {
  sim::TestbedOptions o = BaseOptions(algorithm, options.seed);
  o.processes = {{"target", Payload(options.seed, size), 100}};
  sim::Testbed tb = sim::MakeTestbed(o);
  tb.device->kernel().set_trace_enabled(false);
  Driver driver(tb);
  std::vector<std::int64_t> verify, retrieve, mac;
  for (int i = 0; i < options.warmup + options.repetitions; ++i) {
    const auto& t = driver.Attest(tb.user(0), 0, size - 1);
    if (i < options.warmup) continue;
    verify.push_back(Ns(t.verify_request));
    retrieve.push_back(Ns(t.retrieve_memory));
    mac.push_back(Ns(t.mac_memory));
  }
  Breakdown b;
  b.algorithm = Name(algorithm);
  b.size_bytes = size;
  b.verify_request_ns = static_cast<double>(Median(verify));
  b.retrieve_mem_ns = static_cast<double>(Median(retrieve));
  b.mac_mem_ns = static_cast<double>(Median(mac));
  b.samples = {
      {b.algorithm, size, 1, "verify_request", Median(verify)},
      {b.algorithm, size, 1, "retrieve_mem", Median(retrieve)},
      {b.algorithm, size, 1, "mac_mem", Median(mac)},
  };
  return b;
}

void Report::Add(const std::vector<Sample>& more) {
  samples.insert(samples.end(), more.begin(), more.end());
}

void Report::Add(const Sweep& sweep) {
  Add(sweep.samples);
  sweeps.push_back(sweep);
}

void Report::Add(const Breakdown& breakdown) {
  Add(breakdown.samples);
  breakdowns.push_back(breakdown);
}

std::string ToCsv(const std::vector<Sample>& samples) {
  std::string out = "algorithm,size_bytes,processes,metric,value_ns\n";
  for (const Sample& s : samples) {
    out += s.algorithm + "," + std::to_string(s.size_bytes) + "," +
           std::to_string(s.processes) + "," + s.metric + "," + std::to_string(s.value_ns) +
           "\n";
  }
  return out;
}

std::string ToJson(const Report& report) {
  using nlohmann::json;
  json doc;
  doc["samples"] = json::array();
  for (const Sample& s : report.samples) {
    doc["samples"].push_back({{"algorithm", s.algorithm},
                              {"size_bytes", s.size_bytes},
                              {"processes", s.processes},
                              {"metric", s.metric},
                              {"value_ns", s.value_ns}});
  }
  doc["fits"] = json::array();
  for (const Sweep& s : report.sweeps) {
    doc["fits"].push_back({{"algorithm", s.algorithm},
                           {"variable", s.variable},
                           {"slope_ns", s.fit.slope},
                           {"intercept_ns", s.fit.intercept},
                           {"r2", s.fit.r2}});
  }
  doc["breakdowns"] = json::array();
  for (const Breakdown& b : report.breakdowns) {
    doc["breakdowns"].push_back({{"algorithm", b.algorithm},
                                 {"size_bytes", b.size_bytes},
                                 {"verify_request_share", b.share(b.verify_request_ns)},
                                 {"retrieve_mem_share", b.share(b.retrieve_mem_ns)},
                                 {"mac_mem_share", b.share(b.mac_mem_ns)},
                                 {"retrieve_to_mac_ratio",
                                  b.mac_mem_ns > 0 ? b.retrieve_mem_ns / b.mac_mem_ns : 0.0}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace hydra::bench
