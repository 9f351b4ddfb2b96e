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

#include "hydra/sim/testbed.hpp"

#include <random>

#include "hydra/proto/service.hpp"

namespace hydra::sim {

Bytes SeededBytes(std::uint64_t seed, std::size_t length) {
  std::mt19937_64 rng(seed);
  Bytes out(length);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

Bytes KernelBlobFor(std::uint64_t seed) {
  Bytes blob(AsBytes("hydra-sim kernel\n").begin(), AsBytes("hydra-sim kernel\n").end());
  Bytes body = SeededBytes(seed ^ 0x6b65726e656cULL, 3 * platform::kPageSize);
  blob.insert(blob.end(), body.begin(), body.end());
  return blob;
}

Bytes AttestCodeFor(std::uint64_t seed) {
  Bytes code(AsBytes("hydra-sim attest\n").begin(), AsBytes("hydra-sim attest\n").end());
  Bytes body = SeededBytes(seed ^ 0x617474657374ULL, 2 * platform::kPageSize);
  code.insert(code.end(), body.begin(), body.end());
  return code;
}

crypto::SigningKey VendorKeyFor(std::uint64_t seed) {
  return crypto::SigningKey::FromSeed(SeededBytes(seed ^ 0x76656e646f72ULL, 32));
}

std::uint32_t FramesFor(const std::vector<platform::ProcessSpec>& processes,
                        std::size_t attest_code_size) {
  std::size_t frames = (attest_code_size + platform::kPageSize - 1) / platform::kPageSize + 2;
  for (const auto& p : processes) {
    frames += std::max<std::size_t>(1, (p.image.size() + platform::kPageSize - 1) /
                                           platform::kPageSize);
  }
  return static_cast<std::uint32_t>(frames + 8);
}

std::unique_ptr<proto::Transport> Testbed::Connect() {
  auto service = std::make_shared<proto::ProverService>(*device);
  return std::make_unique<proto::LoopbackTransport>(
      [service](ByteView frame) { return service->HandleFrame(frame); });
}

Testbed MakeTestbed(const TestbedOptions& options) {
  crypto::SigningKey vendor = VendorKeyFor(options.seed);
  Bytes kernel_blob = KernelBlobFor(options.seed);
  Bytes attest_code = AttestCodeFor(options.seed);
  boot::BootImage image = boot::BootImage::Build(kernel_blob, attest_code, vendor);

  platform::DeviceManifest manifest;
  manifest.kernel_blob = kernel_blob;
  manifest.attest_code = attest_code;
  manifest.attestation_key =
      options.attestation_key.empty()
          ? SeededBytes(options.seed ^ 0x6b6579ULL, crypto::MacKeySize(options.mac.algorithm))
          : options.attestation_key;
  manifest.mac = options.mac;
  manifest.window_ms = options.window_ms;
  manifest.persist_interval_ms = options.persist_interval_ms;
  manifest.processes = options.processes;
  manifest.user_frames = options.user_frames != 0
                             ? options.user_frames
                             : FramesFor(options.processes, attest_code.size());
  auto digest = crypto::Hash(vendor.public_key().bytes());
  manifest.rom_pk_digest = Bytes(digest.begin(), digest.end());

  auto counter = std::make_shared<attest::ManualCounter>(options.clock_start_ms);
  auto store = std::make_shared<attest::MemoryTimestampStore>();
  if (options.t_save) store->Save(*options.t_save);

  proto::VerifierKeys keys(options.mac,
                           crypto::MacKey(options.mac.algorithm, manifest.attestation_key));
  boot::FusedRom rom = boot::FusedRom::Burn(vendor.public_key());
  Bytes packed = image.Pack();
  attest::DeviceOptions device_options{options.protections, counter, store};
  auto device = attest::Device::Boot(rom, packed, manifest, device_options);
  return Testbed{vendor,  rom,   std::move(packed), std::move(manifest), counter,
                 store,   keys,  std::move(device)};
}

}  // namespace hydra::sim
