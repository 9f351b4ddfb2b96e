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

#ifndef HYDRA_SIM_TESTBED_HPP_
#define HYDRA_SIM_TESTBED_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "hydra/attest/device.hpp"
#include "hydra/boot/boot.hpp"
#include "hydra/crypto/signature.hpp"
#include "hydra/platform/manifest.hpp"
#include "hydra/proto/verifier.hpp"

namespace hydra::sim {

// Everything needed to stand up a provisioned device in one process. Inputs
// not given explicitly are derived from the seed.
struct TestbedOptions {
  std::vector<platform::ProcessSpec> processes;
  crypto::MacSpec mac = crypto::MacSpec::Default(crypto::MacAlgorithm::kSpeck64_128Cbc);
  Bytes attestation_key;
  // 0 sizes the frame pool to fit the images plus some slack.
  std::uint32_t user_frames = 0;
  std::uint64_t window_ms = 10'000;
  std::uint64_t persist_interval_ms = 1'000;
  std::optional<std::uint64_t> t_save;
  std::uint64_t clock_start_ms = 0;
  Protections protections;
  std::uint64_t seed = 1;
};

struct Testbed {
  crypto::SigningKey vendor_key;
  boot::FusedRom rom;
  Bytes packed_image;
  platform::DeviceManifest manifest;
  std::shared_ptr<attest::ManualCounter> counter;
  std::shared_ptr<attest::MemoryTimestampStore> store;
  proto::VerifierKeys keys;
  std::unique_ptr<attest::Device> device;

  // Loopback transport straight into the device's request handler.
  std::unique_ptr<proto::Transport> Connect();
  platform::ProcessId user(std::size_t i) const { return device->user_processes().at(i); }
};

Testbed MakeTestbed(const TestbedOptions& options);

// Deterministic byte strings for fixtures.
Bytes SeededBytes(std::uint64_t seed, std::size_t length);
Bytes KernelBlobFor(std::uint64_t seed);
Bytes AttestCodeFor(std::uint64_t seed);
crypto::SigningKey VendorKeyFor(std::uint64_t seed);

// One frame per 4 KiB of image plus room for the attestation process.
std::uint32_t FramesFor(const std::vector<platform::ProcessSpec>& processes,
                        std::size_t attest_code_size);

}  // namespace hydra::sim

#endif  // HYDRA_SIM_TESTBED_HPP_
