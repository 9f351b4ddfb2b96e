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

#include "hydra/crypto/signature.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <memory>

namespace hydra::crypto {
namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

PkeyPtr PrivateKey(ByteView seed) {
  return PkeyPtr(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                              seed.data(), seed.size()));
}

}  // namespace

Digest Hash(ByteView message) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(message.data(), message.size(), out.data(), &len,
                 EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kInvalidInput, "SHA-256 failed");
  }
  return out;
}

PublicKey PublicKey::FromBytes(ByteView bytes) {
  if (bytes.size() != kPublicKeySize) {
    throw Error(ErrorCode::kInvalidInput, "Ed25519 public key must be 32 bytes");
  }
  PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                          bytes.data(), bytes.size()));
  if (!key) throw Error(ErrorCode::kInvalidInput, "malformed Ed25519 public key");
  return PublicKey(bytes);
}

SigningKey SigningKey::FromSeed(ByteView seed) {
  if (seed.size() != kSigningSeedSize || !PrivateKey(seed)) {
    throw Error(ErrorCode::kInvalidInput, "Ed25519 seed must be 32 bytes");
  }
  return SigningKey(seed);
}

SigningKey SigningKey::Generate() {
  Bytes seed(kSigningSeedSize);
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw Error(ErrorCode::kIo, "RAND_bytes failed");
  }
  SigningKey key(seed);
  OPENSSL_cleanse(seed.data(), seed.size());
  return key;
}

SigningKey::~SigningKey() {
  if (!seed_.empty()) OPENSSL_cleanse(seed_.data(), seed_.size());
}

PublicKey SigningKey::public_key() const {
  PkeyPtr key = PrivateKey(seed_);
  Bytes pub(kPublicKeySize);
  std::size_t len = pub.size();
  if (!key || EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &len) != 1) {
    throw Error(ErrorCode::kInvalidInput, "cannot derive Ed25519 public key");
  }
  return PublicKey(pub);
}

Bytes Sign(const SigningKey& key, ByteView message) {
  PkeyPtr pkey = PrivateKey(key.seed());
  MdCtxPtr ctx(EVP_MD_CTX_new());
  Bytes sig(kSignatureSize);
  std::size_t len = sig.size();
  if (!pkey || !ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(),
                     message.size()) != 1) {
    throw Error(ErrorCode::kInvalidInput, "Ed25519 signing failed");
  }
  sig.resize(len);
  return sig;
}

bool Verify(ByteView public_key, ByteView message, ByteView signature) noexcept {
  if (public_key.size() != kPublicKeySize || signature.size() != kSignatureSize) {
    return false;
  }
  PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                           public_key.data(), public_key.size()));
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!pkey || !ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                          message.data(), message.size()) == 1;
}

}  // namespace hydra::crypto
