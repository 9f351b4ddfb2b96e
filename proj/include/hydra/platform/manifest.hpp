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

#ifndef HYDRA_PLATFORM_MANIFEST_HPP_
#define HYDRA_PLATFORM_MANIFEST_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/common.hpp"
#include "hydra/crypto/mac.hpp"

namespace hydra::platform {

struct ProcessSpec {
  std::string name;
  Bytes image;
  std::uint8_t priority = 100;
};

// Device description ("flash image" manifest). JSON on disk; see README for
// the schema. Process order is preserved and determines spawn order, so the
// n-th entry becomes process id n.
struct DeviceManifest {
  std::uint32_t user_frames = 256;
  Bytes kernel_blob;
  Bytes attest_code;
  Bytes attestation_key;
  crypto::MacSpec mac = crypto::MacSpec::Default(crypto::MacAlgorithm::kSpeck64_128Cbc);
  std::uint64_t window_ms = 10'000;
  std::uint64_t persist_interval_ms = 1'000;
  std::string timestamp_file;
  std::vector<ProcessSpec> processes;
  std::string boot_image;
  std::optional<Bytes> rom_pk_digest;
};

inline constexpr std::string_view kManifestFormat = "hydra-device-manifest/1";

// Relative file references are resolved against `base_dir`.
DeviceManifest ParseManifest(std::string_view json_text, const std::string& base_dir = ".");
DeviceManifest LoadManifest(const std::string& path);
// Inline-hex form; ParseManifest(SerializeManifest(m)) reproduces m.
std::string SerializeManifest(const DeviceManifest& manifest);

}  // namespace hydra::platform

#endif  // HYDRA_PLATFORM_MANIFEST_HPP_
