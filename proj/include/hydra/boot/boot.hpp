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

#ifndef HYDRA_BOOT_BOOT_HPP_
#define HYDRA_BOOT_BOOT_HPP_

#include <string>

#include "hydra/common.hpp"
#include "hydra/crypto/signature.hpp"
#include "hydra/platform/kernel.hpp"
#include "hydra/platform/manifest.hpp"
#include "hydra/protections.hpp"

namespace hydra::boot {

enum class BootFailure {
  kMalformedImage,
  kPkMismatch,
  kBadSignature,
  kAttestMismatch,
};

std::string_view BootFailureName(BootFailure failure);

// Boot halts with this; there is no fallback image.
class BootRefused : public Error {
 public:
  BootRefused(BootFailure reason, const std::string& detail);
  BootFailure reason() const { return reason_; }

 private:
  BootFailure reason_;
};

// One-time-programmable ROM holding the digest of the vendor public key.
// Contents are fixed at construction ("manufacturing").
class FusedRom {
 public:
  static FusedRom Burn(const crypto::PublicKey& vendor_key,
                       std::string version = "hab-sim-1");
  static FusedRom FromDigest(const crypto::Digest& pk_digest,
                             std::string version = "hab-sim-1");

  const crypto::Digest& pk_digest() const { return pk_digest_; }
  const std::string& version() const { return version_; }

 private:
  FusedRom(const crypto::Digest& digest, std::string version)
      : pk_digest_(digest), version_(std::move(version)) {}

  crypto::Digest pk_digest_;
  std::string version_;
};

// Flash image. Packed as five sections, each a 32-bit big-endian length
// followed by the bytes:
//   [kernel][attest_hash][attest][public key][signature]
// The signature covers the first two sections exactly as packed, so the
// attestation blob is bound through its hash inside the signed kernel region.
struct BootImage {
  Bytes kernel_blob;
  crypto::Digest attest_hash{};
  Bytes attest_blob;
  Bytes public_key;
  Bytes signature;

  static BootImage Build(ByteView kernel_blob, ByteView attest_blob,
                         const crypto::SigningKey& vendor_key);
  // Throws BootRefused(kMalformedImage) on any framing error.
  static BootImage Unpack(ByteView packed);

  Bytes SignedRegion() const;
  Bytes Pack() const;
};

// Proof that the ROM accepted the kernel. Only BootChain can create one.
class VerifiedKernel {
 public:
  const Bytes& kernel_blob() const { return kernel_blob_; }
  const crypto::Digest& attest_hash() const { return attest_hash_; }

 private:
  friend class BootChain;
  VerifiedKernel(Bytes kernel, const crypto::Digest& attest_hash, Protections protections)
      : kernel_blob_(std::move(kernel)), attest_hash_(attest_hash), protections_(protections) {}

  Bytes kernel_blob_;
  crypto::Digest attest_hash_;
  Protections protections_;
};

// Everything the device provides next to the flash image.
struct Provisioning {
  Bytes attestation_key;
  std::uint32_t user_frames = 256;
  Protections protections;

  static Provisioning FromManifest(const platform::DeviceManifest& manifest,
                                   const Protections& protections = {});
};

// The secure boot sequence. The platform kernel can only be brought up via
// FullBoot.
class BootChain {
 public:
  // Checks the embedded key against the ROM digest, then the signature.
  static VerifiedKernel RomBoot(const FusedRom& rom, const BootImage& image,
                                const Protections& protections = {});
  // Go iff the attestation blob hashes to the value embedded in the kernel.
  static bool KernelVerifyAttest(const VerifiedKernel& kernel, ByteView attest_blob);
  static platform::Kernel FullBoot(const FusedRom& rom, ByteView packed_image,
                                   const Provisioning& provisioning);
};

inline VerifiedKernel RomBoot(const FusedRom& rom, const BootImage& image,
                              const Protections& protections = {}) {
  return BootChain::RomBoot(rom, image, protections);
}

inline bool KernelVerifyAttest(const VerifiedKernel& kernel, ByteView attest_blob) {
  return BootChain::KernelVerifyAttest(kernel, attest_blob);
}

inline platform::Kernel FullBoot(const FusedRom& rom, ByteView packed_image,
                                 const Provisioning& provisioning) {
  return BootChain::FullBoot(rom, packed_image, provisioning);
}

}  // namespace hydra::boot

#endif  // HYDRA_BOOT_BOOT_HPP_
