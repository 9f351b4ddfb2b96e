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

#include <filesystem>

#include <gtest/gtest.h>

#include "hydra/platform/manifest.hpp"
#include "test_util.hpp"

namespace hydra::platform {
namespace {

using testing::Iota;

constexpr std::string_view kExample = R"({
  "format": "hydra-device-manifest/1",
  "user_frames": 48,
  "kernel": {"hex": "00112233"},
  "attestation": {
    "code": {"hex": "c0de"},
    "key": "000102030405060708090a0b0c0d0e0f",
    "mac": "SIMON_64_128_CBC",
    "tag_length": 8,
    "window_ms": 2500
  },
  "processes": [
    {"name": "sensor", "image": {"hex": "aabbcc"}, "priority": 20},
    {"name": "logger", "image": {"hex": "dd"}}
  ],
  "boot": {"image": "boot.img"}
})";

TEST(ManifestTest, ParsesExample) {
  DeviceManifest m = ParseManifest(kExample, "/etc/dev");
  EXPECT_EQ(m.user_frames, 48u);
  EXPECT_EQ(m.kernel_blob, FromHex("00112233"));
  EXPECT_EQ(m.attest_code, FromHex("c0de"));
  EXPECT_EQ(m.attestation_key, Iota(16));
  EXPECT_EQ(m.mac.algorithm, crypto::MacAlgorithm::kSimon64_128Cbc);
  EXPECT_EQ(m.mac.tag_length, 8u);
  EXPECT_EQ(m.window_ms, 2500u);
  EXPECT_EQ(m.persist_interval_ms, 1000u);
  ASSERT_EQ(m.processes.size(), 2u);
  EXPECT_EQ(m.processes[0].name, "sensor");
  EXPECT_EQ(m.processes[0].priority, 20);
  EXPECT_EQ(m.processes[1].priority, 100);
  EXPECT_EQ(m.boot_image, "/etc/dev/boot.img");
  EXPECT_FALSE(m.rom_pk_digest);
}

TEST(ManifestTest, SerializeRoundTrip) {
  DeviceManifest m = ParseManifest(kExample, "/etc/dev");
  m.rom_pk_digest = Iota(32);
  m.timestamp_file = "/var/ts";
  DeviceManifest back = ParseManifest(SerializeManifest(m), "/elsewhere");
  EXPECT_EQ(back.kernel_blob, m.kernel_blob);
  EXPECT_EQ(back.mac, m.mac);
  EXPECT_EQ(back.processes.size(), 2u);
  EXPECT_EQ(back.processes[0].image, m.processes[0].image);
  EXPECT_EQ(back.boot_image, m.boot_image);
  EXPECT_EQ(back.timestamp_file, "/var/ts");
  EXPECT_EQ(back.rom_pk_digest, m.rom_pk_digest);
}

TEST(ManifestTest, LoadsBlobsFromFiles) {
  auto dir = std::filesystem::temp_directory_path() / "hydra_manifest_test";
  std::filesystem::create_directories(dir);
  WriteFile((dir / "k.bin").string(), Iota(300));
  WriteFile((dir / "m.json").string(),
            AsBytes(R"({"format":"hydra-device-manifest/1","kernel":{"file":"k.bin"},
              "attestation":{"code":{"file":"k.bin"},"key":"00000000000000000000000000000000"}})"));
  DeviceManifest m = LoadManifest((dir / "m.json").string());
  EXPECT_EQ(m.kernel_blob, Iota(300));
  EXPECT_EQ(m.mac.algorithm, crypto::MacAlgorithm::kSpeck64_128Cbc);
  std::filesystem::remove_all(dir);
}

TEST(ManifestTest, RejectsBadInput) {
  auto bad = [](std::string_view text) {
    EXPECT_HYDRA_ERROR(ParseManifest(text), ErrorCode::kInvalidInput);
  };
  bad("not json");
  bad(R"({"format":"other"})");
  bad(R"({"format":"hydra-device-manifest/1"})");
  const std::string base =
      R"({"format":"hydra-device-manifest/1","kernel":{"hex":"00"},"attestation":{"code":{"hex":"00"},)";
  bad(base + R"("key":"0011"}})");
  bad(base + R"("key":"000102030405060708090a0b0c0d0e0f","mac":"MD5"}})");
  bad(base + R"("key":"000102030405060708090a0b0c0d0e0f","tag_length":12}})");
  bad(base + R"("key":"000102030405060708090a0b0c0d0e0f","window_ms":0}})");
  bad(base + R"("key":"000102030405060708090a0b0c0d0e0f"},"processes":[{"name":"x","image":{"hex":"00"},"priority":300}]})");
  bad(base + R"("key":"000102030405060708090a0b0c0d0e0f"},"processes":[{"name":"x","image":"00"}]})");
}

}  // namespace
}  // namespace hydra::platform
