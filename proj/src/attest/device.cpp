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

#include "hydra/attest/device.hpp"

namespace hydra::attest {

std::unique_ptr<Device> Device::Boot(const boot::FusedRom& rom, ByteView packed_image,
                                     const platform::DeviceManifest& manifest,
                                     DeviceOptions options) {
  std::unique_ptr<Device> device(new Device());
  device->kernel_ = std::make_unique<platform::Kernel>(boot::FullBoot(
      rom, packed_image, boot::Provisioning::FromManifest(manifest, options.protections)));
  if (!options.counter) options.counter = std::make_shared<SteadyCounter>();
  if (!options.store) {
    if (manifest.timestamp_file.empty()) {
      options.store = std::make_shared<MemoryTimestampStore>();
    } else {
      options.store = std::make_shared<FileTimestampStore>(manifest.timestamp_file);
    }
  }
  device->attestation_ = std::make_unique<AttestationProcess>(
      *device->kernel_, AttestConfig::FromManifest(manifest, options.protections),
      options.counter, options.store);
  device->user_ = device->attestation_->SpawnUserProcesses(manifest.processes);
  return device;
}

std::unique_ptr<Device> Device::FromManifest(const platform::DeviceManifest& manifest,
                                             DeviceOptions options) {
  if (manifest.boot_image.empty()) {
    throw Error(ErrorCode::kInvalidInput, "manifest names no boot image");
  }
  if (!manifest.rom_pk_digest || manifest.rom_pk_digest->size() != crypto::Digest{}.size()) {
    throw Error(ErrorCode::kInvalidInput, "manifest carries no ROM key digest");
  }
  crypto::Digest digest{};
  std::copy(manifest.rom_pk_digest->begin(), manifest.rom_pk_digest->end(), digest.begin());
  Bytes packed = ReadFile(manifest.boot_image);
  return Boot(boot::FusedRom::FromDigest(digest), packed, manifest, std::move(options));
}

AttestOutcome Device::HandleRequest(const proto::AttestationRequest& request) {
  std::lock_guard lock(mutex_);
  AttestOutcome outcome = attestation_->Attest(request);
  attestation_->PersistTimestamp();
  return outcome;
}

}  // namespace hydra::attest
