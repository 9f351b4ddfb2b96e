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

#include "hydra/boot/boot.hpp"

#include <algorithm>

namespace hydra::boot {
namespace {

constexpr std::size_t kSectionCount = 5;

void AppendSection(Bytes& out, ByteView section) {
  AppendU32(out, static_cast<std::uint32_t>(section.size()));
  out.insert(out.end(), section.begin(), section.end());
}

}  // namespace

std::string_view BootFailureName(BootFailure failure) {
  switch (failure) {
    case BootFailure::kMalformedImage: return "MalformedImage";
    case BootFailure::kPkMismatch: return "PkMismatch";
    case BootFailure::kBadSignature: return "BadSignature";
    case BootFailure::kAttestMismatch: return "AttestMismatch";
  }
  return "?";
}

BootRefused::BootRefused(BootFailure reason, const std::string& detail)
    : Error(ErrorCode::kBootRefused, std::string(BootFailureName(reason)) + ": " + detail),
      reason_(reason) {}

FusedRom FusedRom::Burn(const crypto::PublicKey& vendor_key, std::string version) {
  return FusedRom(crypto::Hash(vendor_key.bytes()), std::move(version));
}

FusedRom FusedRom::FromDigest(const crypto::Digest& pk_digest, std::string version) {
  return FusedRom(pk_digest, std::move(version));
}

BootImage BootImage::Build(ByteView kernel_blob, ByteView attest_blob,
                           const crypto::SigningKey& vendor_key) {
  BootImage image;
  image.kernel_blob.assign(kernel_blob.begin(), kernel_blob.end());
  image.attest_blob.assign(attest_blob.begin(), attest_blob.end());
  image.attest_hash = crypto::Hash(attest_blob);
  crypto::PublicKey pk = vendor_key.public_key();
  image.public_key.assign(pk.bytes().begin(), pk.bytes().end());
  image.signature = crypto::Sign(vendor_key, image.SignedRegion());
  return image;
}

Bytes BootImage::SignedRegion() const {
  Bytes region;
  region.reserve(kernel_blob.size() + attest_hash.size() + 8);
  AppendSection(region, kernel_blob);
  AppendSection(region, attest_hash);
  return region;
}

Bytes BootImage::Pack() const {
  Bytes out = SignedRegion();
  AppendSection(out, attest_blob);
  AppendSection(out, public_key);
  AppendSection(out, signature);
  return out;
}

BootImage BootImage::Unpack(ByteView packed) {
  std::vector<Bytes> sections;
  std::size_t pos = 0;
  while (sections.size() < kSectionCount) {
    if (packed.size() - pos < 4) {
      throw BootRefused(BootFailure::kMalformedImage, "truncated section header");
    }
    std::uint32_t len = LoadU32(packed.subspan(pos, 4));
    pos += 4;
    if (packed.size() - pos < len) {
      throw BootRefused(BootFailure::kMalformedImage, "section overruns image");
    }
    sections.emplace_back(packed.begin() + pos, packed.begin() + pos + len);
    pos += len;
  }
  if (pos != packed.size()) {
    throw BootRefused(BootFailure::kMalformedImage, "trailing bytes after signature");
  }
  if (sections[1].size() != crypto::Digest().size()) {
    throw BootRefused(BootFailure::kMalformedImage, "attest hash must be 32 bytes");
  }
  BootImage image;
  image.kernel_blob = std::move(sections[0]);
  std::copy(sections[1].begin(), sections[1].end(), image.attest_hash.begin());
  image.attest_blob = std::move(sections[2]);
  image.public_key = std::move(sections[3]);
  image.signature = std::move(sections[4]);
  return image;
}

Provisioning Provisioning::FromManifest(const platform::DeviceManifest& manifest,
                                        const Protections& protections) {
  return Provisioning{manifest.attestation_key, manifest.user_frames, protections};
}

VerifiedKernel BootChain::RomBoot(const FusedRom& rom, const BootImage& image,
                                  const Protections& protections) {
  if (protections.boot_verification) {
    if (crypto::Hash(image.public_key) != rom.pk_digest()) {
      throw BootRefused(BootFailure::kPkMismatch,
                        "embedded public key does not match fused digest");
    }
    if (!crypto::Verify(ByteView(image.public_key), image.SignedRegion(), image.signature)) {
      throw BootRefused(BootFailure::kBadSignature, "kernel signature rejected");
    }
  }
  return VerifiedKernel(image.kernel_blob, image.attest_hash, protections);
}

bool BootChain::KernelVerifyAttest(const VerifiedKernel& kernel, ByteView attest_blob) {
  if (!kernel.protections_.boot_verification) return true;
  return crypto::Hash(attest_blob) == kernel.attest_hash();
}

platform::Kernel BootChain::FullBoot(const FusedRom& rom, ByteView packed_image,
                                     const Provisioning& provisioning) {
  BootImage image = BootImage::Unpack(packed_image);
  VerifiedKernel kernel = RomBoot(rom, image, provisioning.protections);
  if (!KernelVerifyAttest(kernel, image.attest_blob)) {
    throw BootRefused(BootFailure::kAttestMismatch,
                      "attestation process does not match kernel-embedded hash");
  }
  platform::KernelBootConfig config;
  config.kernel_blob = kernel.kernel_blob();
  config.attest_code = image.attest_blob;
  config.key_material = provisioning.attestation_key;
  config.user_frames = provisioning.user_frames;
  config.protections = provisioning.protections;
  return platform::Kernel::Boot(platform::BootToken(), config);
}

}  // namespace hydra::boot
