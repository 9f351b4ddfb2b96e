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

#ifndef HYDRA_ATTEST_DEVICE_HPP_
#define HYDRA_ATTEST_DEVICE_HPP_

#include <memory>
#include <mutex>
#include <vector>

#include "hydra/attest/attestation.hpp"
#include "hydra/boot/boot.hpp"
#include "hydra/platform/manifest.hpp"

namespace hydra::attest {

struct DeviceOptions {
  Protections protections;
  // Defaults to a steady clock.
  std::shared_ptr<const MonotonicCounter> counter;
  // Defaults to the manifest's timestamp file, or memory if none is set.
  std::shared_ptr<TimestampStore> store;
};

// A booted prover: kernel, attestation process and the user processes from
// the manifest. Requests are served one at a time.
class Device {
 public:
  static std::unique_ptr<Device> Boot(const boot::FusedRom& rom, ByteView packed_image,
                                      const platform::DeviceManifest& manifest,
                                      DeviceOptions options = {});
  // Reads the boot image and ROM digest named by the manifest.
  static std::unique_ptr<Device> FromManifest(const platform::DeviceManifest& manifest,
                                              DeviceOptions options = {});

  Device(const Device&) = delete;
  Device& operator=(const Device&) = delete;

  AttestOutcome HandleRequest(const proto::AttestationRequest& request);

  const std::vector<platform::ProcessId>& user_processes() const { return user_; }

  // Direct access for tests and the adversary harness. Callers must not race
  // HandleRequest.
  platform::Kernel& kernel() { return *kernel_; }
  AttestationProcess& attestation() { return *attestation_; }
  std::mutex& mutex() { return mutex_; }

 private:
  Device() = default;

  std::unique_ptr<platform::Kernel> kernel_;
  std::unique_ptr<AttestationProcess> attestation_;
  std::vector<platform::ProcessId> user_;
  std::mutex mutex_;
};

}  // namespace hydra::attest

#endif  // HYDRA_ATTEST_DEVICE_HPP_
