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

#include "hydra/attest/attestation.hpp"

#include <openssl/crypto.h>

#include <algorithm>

namespace hydra::attest {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t InitialTSave(const std::shared_ptr<TimestampStore>& store) {
  if (!store) return 0;
  return store->Load().value_or(0);
}

// Marks the attestation process blocked again however Attest() exits.
class RunningGuard {
 public:
  RunningGuard(platform::Kernel& kernel, platform::ProcessId self)
      : kernel_(kernel), self_(self) {
    kernel_.SetRunnable(self_, true);
  }
  ~RunningGuard() { kernel_.SetRunnable(self_, false); }

 private:
  platform::Kernel& kernel_;
  platform::ProcessId self_;
};

}  // namespace

AttestConfig AttestConfig::FromManifest(const platform::DeviceManifest& manifest,
                                        const Protections& protections) {
  return AttestConfig{manifest.mac, manifest.window_ms, manifest.persist_interval_ms,
                      protections};
}

std::string_view DropReasonName(DropReason reason) {
  return reason == DropReason::kStale ? "Stale" : "BadMac";
}

Bytes ReportMacInput(const proto::RequestHeader& header, ByteView memory) {
  auto h = proto::EncodeHeader(header);
  Bytes out(h.size() + memory.size());
  std::copy(h.begin(), h.end(), out.begin());
  std::copy(memory.begin(), memory.end(), out.begin() + h.size());
  return out;
}

AttestationProcess::AttestationProcess(platform::Kernel& kernel, AttestConfig config,
                                       std::shared_ptr<const MonotonicCounter> counter,
                                       std::shared_ptr<TimestampStore> store)
    : kernel_(kernel),
      config_(config),
      self_(kernel.initial_process()),
      store_(std::move(store)),
      clock_(InitialTSave(store_), std::move(counter), config.window_ms,
             config.persist_interval_ms, config.protections.timestamp_monotonic) {
  config_.mac.Validate();
  const platform::InitialProcessLayout& layout = kernel_.initial_layout();
  if (layout.key_length != crypto::MacKeySize(config_.mac.algorithm)) {
    throw Error(ErrorCode::kInvalidInput,
                "provisioned key length does not fit " +
                    std::string(crypto::MacAlgorithmName(config_.mac.algorithm)));
  }
  // K_Auth lives in our scratch frame next to K; neither leaves our VSpace.
  crypto::MacKey auth = crypto::DeriveAuthKey(LoadKey(layout.key_offset));
  kernel_.WriteVirtual(self_, kernel_.Process(self_).image_base + layout.scratch_offset,
                       auth.bytes());
  kernel_.SetRunnable(self_, false);
}

crypto::MacKey AttestationProcess::LoadKey(std::uint64_t offset) const {
  Bytes raw = kernel_.ReadVirtual(self_, kernel_.Process(self_).image_base + offset,
                                  crypto::MacKeySize(config_.mac.algorithm));
  crypto::MacKey key(config_.mac.algorithm, raw);
  OPENSSL_cleanse(raw.data(), raw.size());
  return key;
}

void AttestationProcess::Yield() { kernel_.RunUntilScheduled(self_); }

platform::ProcessId AttestationProcess::SpawnUserProcess(const platform::ProcessSpec& spec) {
  std::uint8_t own = kernel_.PriorityOf(self_);
  if (spec.priority >= own) {
    throw Error(ErrorCode::kPriorityEscalation,
                spec.name + " requested priority " + std::to_string(spec.priority) +
                    ", must be below " + std::to_string(own));
  }
  std::vector<platform::Capability> granted;
  if (!config_.protections.tcb_isolation) {
    // Misconfiguration used by the adversary harness.
    for (const auto& slot : kernel_.CSpaceOf(self_)) {
      if (slot && slot->object() == kernel_.Process(self_).tcb) granted.push_back(*slot);
    }
  }
  platform::ProcessId pid = kernel_.Spawn(self_, spec.name, spec.image, spec.priority, granted);
  if (!config_.protections.live_measurement) boot_snapshots_[pid.value] = spec.image;
  return pid;
}

std::vector<platform::ProcessId> AttestationProcess::SpawnUserProcesses(
    const std::vector<platform::ProcessSpec>& specs) {
  std::vector<platform::ProcessId> ids;
  for (const auto& spec : specs) ids.push_back(SpawnUserProcess(spec));
  return ids;
}

bool AttestationProcess::VerifyRequest(const proto::AttestationRequest& request) {
  if (!config_.protections.request_authentication) return true;
  if (request.mac.size() != config_.mac.tag_length) return false;
  crypto::MacKey auth = LoadKey(kernel_.initial_layout().scratch_offset);
  auto header = proto::EncodeHeader(request.header);
  Bytes expected = crypto::ComputeMac(config_.mac, auth, header);
  bool ok = crypto::ConstantTimeEquals(expected, request.mac);
  OPENSSL_cleanse(expected.data(), expected.size());
  return ok;
}

AttestOutcome AttestationProcess::Attest(const proto::AttestationRequest& request) {
  RunningGuard running(kernel_, self_);
  Yield();
  timings_ = {};
  auto t0 = Clock::now();
  const proto::RequestHeader& h = request.header;
  if (!clock_.CheckFreshness(h.timestamp_ms)) {
    timings_.verify_request = Clock::now() - t0;
    return Dropped{DropReason::kStale};
  }
  if (!VerifyRequest(request)) {
    timings_.verify_request = Clock::now() - t0;
    return Dropped{DropReason::kBadMac};
  }
  clock_.RecordAccepted(h.timestamp_ms);
  auto t1 = Clock::now();
  timings_.verify_request = t1 - t0;

  platform::ProcessId target{h.process};
  std::optional<platform::ForeignView> view;
  try {
    view.emplace(kernel_.MapForeignFrames(self_, target, h.first, h.last));
  } catch (const Error& e) {
    timings_.retrieve_memory = Clock::now() - t1;
    if (e.code() == ErrorCode::kUnknownProcess) {
      return Failed{proto::FailureCode::kUnknownProcess};
    }
    if (e.code() == ErrorCode::kRangeOutOfBounds) {
      return Failed{proto::FailureCode::kRangeOutOfBounds};
    }
    throw;
  }
  auto t2 = Clock::now();
  timings_.retrieve_memory = t2 - t1;

  crypto::MacKey key = LoadKey(kernel_.initial_layout().key_offset);
  std::uint64_t length = h.last - h.first + 1;
  crypto::MacState mac(config_.mac, key, proto::kHeaderSize + length);
  mac.Update(proto::EncodeHeader(h));
  auto snapshot = boot_snapshots_.find(h.process);
  if (snapshot != boot_snapshots_.end()) {
    mac.Update(ByteView(snapshot->second).subspan(h.first, length));
  } else {
    for (std::size_t i = 0; i < view->chunk_count(); ++i) {
      Yield();
      mac.Update(view->Chunk(i));
    }
  }
  Bytes tag = mac.Final();
  timings_.mac_memory = Clock::now() - t2;
  return proto::AttestationReport{h, std::move(tag)};
}

bool AttestationProcess::PersistTimestamp() {
  if (!store_) return false;
  return clock_.PersistIfDue(*store_);
}

}  // namespace hydra::attest
