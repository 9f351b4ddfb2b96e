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

#ifndef HYDRA_ATTEST_ATTESTATION_HPP_
#define HYDRA_ATTEST_ATTESTATION_HPP_

#include <chrono>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "hydra/attest/clock.hpp"
#include "hydra/crypto/mac.hpp"
#include "hydra/platform/kernel.hpp"
#include "hydra/platform/manifest.hpp"
#include "hydra/proto/wire.hpp"
#include "hydra/protections.hpp"

namespace hydra::attest {

struct AttestConfig {
  crypto::MacSpec mac = crypto::MacSpec::Default(crypto::MacAlgorithm::kSpeck64_128Cbc);
  std::uint64_t window_ms = 10'000;
  std::uint64_t persist_interval_ms = 1'000;
  Protections protections;

  static AttestConfig FromManifest(const platform::DeviceManifest& manifest,
                                   const Protections& protections = {});
};

enum class DropReason { kStale, kBadMac };

std::string_view DropReasonName(DropReason reason);

// Unauthenticated or stale traffic: nothing goes back to the sender.
struct Dropped {
  DropReason reason;
};

// Authenticated request that could not be served.
struct Failed {
  proto::FailureCode code;
};

using AttestOutcome = std::variant<proto::AttestationReport, Dropped, Failed>;

// Wall time spent in each phase of the last Attest() call.
struct PhaseTimings {
  std::chrono::nanoseconds verify_request{0};
  std::chrono::nanoseconds retrieve_memory{0};
  std::chrono::nanoseconds mac_memory{0};
};

// The initial user-space process. Owns the attestation key (in its own
// frames), the freshness clock, and the request-serving loop body.
class AttestationProcess {
 public:
  AttestationProcess(platform::Kernel& kernel, AttestConfig config,
                     std::shared_ptr<const MonotonicCounter> counter,
                     std::shared_ptr<TimestampStore> store);

  platform::ProcessId id() const { return self_; }
  const AttestConfig& config() const { return config_; }

  // Starts a user process at a priority strictly below our own, holding only
  // its CSpace root and fault endpoint.
  platform::ProcessId SpawnUserProcess(const platform::ProcessSpec& spec);
  std::vector<platform::ProcessId> SpawnUserProcesses(
      const std::vector<platform::ProcessSpec>& specs);

  // Freshness, then authentication, then the measurement. Runs as the
  // highest-priority process from start to finish.
  AttestOutcome Attest(const proto::AttestationRequest& request);

  bool CheckFreshness(std::uint64_t t_r) const { return clock_.CheckFreshness(t_r); }
  bool VerifyRequest(const proto::AttestationRequest& request);

  // Periodic housekeeping: saves the clock when due.
  bool PersistTimestamp();

  const ClockState& clock() const { return clock_; }
  const PhaseTimings& last_timings() const { return timings_; }

 private:
  crypto::MacKey LoadKey(std::uint64_t offset) const;
  // Blocks until the scheduler hands us the CPU.
  void Yield();

  platform::Kernel& kernel_;
  AttestConfig config_;
  platform::ProcessId self_;
  std::shared_ptr<TimestampStore> store_;
  ClockState clock_;
  PhaseTimings timings_;
  // Only populated when live_measurement is disabled.
  std::map<std::uint32_t, Bytes> boot_snapshots_;
};

// Encoded header plus the memory bytes the report covers; the MAC input of a
// report is exactly this.
Bytes ReportMacInput(const proto::RequestHeader& header, ByteView memory);

}  // namespace hydra::attest

#endif  // HYDRA_ATTEST_ATTESTATION_HPP_
