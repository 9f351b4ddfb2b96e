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

#include <random>

#include <gtest/gtest.h>

#include "hydra/boot/boot.hpp"
#include "hydra/sim/testbed.hpp"
#include "test_util.hpp"

namespace hydra::boot {
namespace {

using testing::Iota;

struct Fixture {
  crypto::SigningKey vendor = sim::VendorKeyFor(3);
  Bytes kernel = sim::KernelBlobFor(3);
  Bytes attest = sim::AttestCodeFor(3);
  BootImage image = BootImage::Build(kernel, attest, vendor);
  FusedRom rom = FusedRom::Burn(vendor.public_key());
  Provisioning provisioning{Iota(16), 16, {}};
};

BootFailure FailureOf(const FusedRom& rom, ByteView packed, const Provisioning& p) {
  try {
    FullBoot(rom, packed, p);
  } catch (const BootRefused& e) {
    return e.reason();
  }
  ADD_FAILURE() << "image booted";
  return BootFailure::kMalformedImage;
}

TEST(BootTest, HonestImageBoots) {
  Fixture f;
  platform::Kernel k = FullBoot(f.rom, f.image.Pack(), f.provisioning);
  EXPECT_EQ(k.ReadVirtual(k.initial_process(), platform::kImageBase, f.attest.size()), f.attest);
}

TEST(BootTest, PackUnpackRoundTrip) {
  Fixture f;
  BootImage back = BootImage::Unpack(f.image.Pack());
  EXPECT_EQ(back.kernel_blob, f.kernel);
  EXPECT_EQ(back.attest_blob, f.attest);
  EXPECT_EQ(back.attest_hash, crypto::Hash(f.attest));
  EXPECT_EQ(back.Pack(), f.image.Pack());
  EXPECT_EQ(back.signature.size(), 64u);
}

TEST(BootTest, RomFromDigestMatchesBurn) {
  Fixture f;
  FusedRom rom = FusedRom::FromDigest(crypto::Hash(f.vendor.public_key().bytes()));
  EXPECT_EQ(rom.pk_digest(), f.rom.pk_digest());
  EXPECT_NO_THROW(FullBoot(rom, f.image.Pack(), f.provisioning));
}

TEST(BootTest, TamperedKernelIsRefused) {
  Fixture f;
  BootImage evil = f.image;
  evil.kernel_blob[100] ^= 1;
  EXPECT_EQ(FailureOf(f.rom, evil.Pack(), f.provisioning), BootFailure::kBadSignature);
}

TEST(BootTest, TamperedAttestationIsRefused) {
  Fixture f;
  BootImage evil = f.image;
  evil.attest_blob[5] ^= 0x80;
  EXPECT_EQ(FailureOf(f.rom, evil.Pack(), f.provisioning), BootFailure::kAttestMismatch);
  // Fixing the embedded hash breaks the signature instead.
  evil.attest_hash = crypto::Hash(evil.attest_blob);
  EXPECT_EQ(FailureOf(f.rom, evil.Pack(), f.provisioning), BootFailure::kBadSignature);
}

TEST(BootTest, ForeignVendorKeyIsRefused) {
  Fixture f;
  BootImage evil = BootImage::Build(f.kernel, f.attest, sim::VendorKeyFor(4));
  EXPECT_EQ(FailureOf(f.rom, evil.Pack(), f.provisioning), BootFailure::kPkMismatch);
}

TEST(BootTest, BadSignatureIsRefused) {
  Fixture f;
  BootImage evil = f.image;
  evil.signature[10] ^= 4;
  EXPECT_EQ(FailureOf(f.rom, evil.Pack(), f.provisioning), BootFailure::kBadSignature);
  evil.signature.pop_back();
  EXPECT_EQ(FailureOf(f.rom, evil.Pack(), f.provisioning), BootFailure::kBadSignature);
}

TEST(BootTest, MalformedImagesAreRefused) {
  Fixture f;
  Bytes packed = f.image.Pack();
  EXPECT_EQ(FailureOf(f.rom, Bytes{}, f.provisioning), BootFailure::kMalformedImage);
  EXPECT_EQ(FailureOf(f.rom, ByteView(packed).first(packed.size() - 1), f.provisioning),
            BootFailure::kMalformedImage);
  Bytes trailing = packed;
  trailing.push_back(0);
  EXPECT_EQ(FailureOf(f.rom, trailing, f.provisioning), BootFailure::kMalformedImage);
}

TEST(BootPropertyTest, RandomCorruptionNeverBoots) {
  Fixture f;
  Bytes packed = f.image.Pack();
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    Bytes evil = packed;
    int flips = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < flips; ++j) {
      evil[rng() % evil.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    }
    EXPECT_THROW(FullBoot(f.rom, evil, f.provisioning), BootRefused) << "trial " << i;
  }
}

TEST(BootTest, DisabledVerificationBootsTamperedImage) {
  Fixture f;
  BootImage evil = f.image;
  evil.kernel_blob[0] ^= 1;
  evil.attest_blob[0] ^= 1;
  Provisioning weak = f.provisioning;
  weak.protections.boot_verification = false;
  EXPECT_NO_THROW(FullBoot(f.rom, evil.Pack(), weak));
}

TEST(BootTest, ProvisioningFollowsManifest) {
  platform::DeviceManifest m;
  m.attestation_key = Iota(16, 9);
  m.user_frames = 40;
  Protections p;
  p.live_measurement = false;
  Provisioning prov = Provisioning::FromManifest(m, p);
  EXPECT_EQ(prov.attestation_key, m.attestation_key);
  EXPECT_EQ(prov.user_frames, 40u);
  EXPECT_FALSE(prov.protections.live_measurement);
}

}  // namespace
}  // namespace hydra::boot
