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

#include "hydra/crypto/block_cipher.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>

namespace hydra::crypto {
namespace {

std::uint32_t LoadLe32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

void StoreLe32(std::uint32_t v, std::uint8_t* p) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

void CheckKey(ByteView key, std::size_t expected, const char* what) {
  if (key.size() != expected) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " key must be " + std::to_string(expected) +
                    " bytes, got " + std::to_string(key.size()));
  }
}

void CheckBlock(ByteView block, std::size_t expected) {
  if (block.size() != expected) {
    throw Error(ErrorCode::kInvalidInput,
                "block must be " + std::to_string(expected) + " bytes, got " +
                    std::to_string(block.size()));
  }
}

// Simon z3 constant sequence, bit i of the 62-bit period, MSB first.
constexpr char kZ3[] =
    "11011011101011000110010111100000010010001010011100110100001111";

std::uint32_t SimonF(std::uint32_t x) {
  return (std::rotl(x, 1) & std::rotl(x, 8)) ^ std::rotl(x, 2);
}

}  // namespace

Speck64_128::Speck64_128(ByteView key) {
  CheckKey(key, kKeySize, "Speck64/128");
  std::uint32_t k = LoadLe32(key.data());
  std::array<std::uint32_t, kRounds + 2> l{};
  l[0] = LoadLe32(key.data() + 4);
  l[1] = LoadLe32(key.data() + 8);
  l[2] = LoadLe32(key.data() + 12);
  for (int i = 0; i < kRounds; ++i) {
    round_keys_[i] = k;
    if (i + 1 == kRounds) break;
    l[i + 3] = (k + std::rotr(l[i], 8)) ^ static_cast<std::uint32_t>(i);
    k = std::rotl(k, 3) ^ l[i + 3];
  }
}

void Speck64_128::EncryptWords(std::uint32_t& x, std::uint32_t& y) const {
  for (std::uint32_t rk : round_keys_) {
    x = (std::rotr(x, 8) + y) ^ rk;
    y = std::rotl(y, 3) ^ x;
  }
}

void Speck64_128::DecryptWords(std::uint32_t& x, std::uint32_t& y) const {
  for (int i = kRounds - 1; i >= 0; --i) {
    y = std::rotr(y ^ x, 3);
    x = std::rotl((x ^ round_keys_[i]) - y, 8);
  }
}

void Speck64_128::EncryptBlock(const std::uint8_t* in, std::uint8_t* out) const {
  std::uint32_t y = LoadLe32(in);
  std::uint32_t x = LoadLe32(in + 4);
  EncryptWords(x, y);
  StoreLe32(y, out);
  StoreLe32(x, out + 4);
}

void Speck64_128::DecryptBlock(const std::uint8_t* in, std::uint8_t* out) const {
  std::uint32_t y = LoadLe32(in);
  std::uint32_t x = LoadLe32(in + 4);
  DecryptWords(x, y);
  StoreLe32(y, out);
  StoreLe32(x, out + 4);
}

Simon64_128::Simon64_128(ByteView key) {
  CheckKey(key, kKeySize, "Simon64/128");
  for (int i = 0; i < 4; ++i) round_keys_[i] = LoadLe32(key.data() + 4 * i);
  for (int i = 4; i < kRounds; ++i) {
    std::uint32_t t = std::rotr(round_keys_[i - 1], 3) ^ round_keys_[i - 3];
    t ^= std::rotr(t, 1);
    std::uint32_t z = kZ3[(i - 4) % 62] == '1' ? 1u : 0u;
    round_keys_[i] = ~round_keys_[i - 4] ^ t ^ z ^ 3u;
  }
}

void Simon64_128::EncryptWords(std::uint32_t& x, std::uint32_t& y) const {
  for (std::uint32_t rk : round_keys_) {
    std::uint32_t t = x;
    x = y ^ SimonF(x) ^ rk;
    y = t;
  }
}

void Simon64_128::DecryptWords(std::uint32_t& x, std::uint32_t& y) const {
  for (int i = kRounds - 1; i >= 0; --i) {
    std::uint32_t t = y;
    y = x ^ SimonF(y) ^ round_keys_[i];
    x = t;
  }
}

void Simon64_128::EncryptBlock(const std::uint8_t* in, std::uint8_t* out) const {
  std::uint32_t y = LoadLe32(in);
  std::uint32_t x = LoadLe32(in + 4);
  EncryptWords(x, y);
  StoreLe32(y, out);
  StoreLe32(x, out + 4);
}

void Simon64_128::DecryptBlock(const std::uint8_t* in, std::uint8_t* out) const {
  std::uint32_t y = LoadLe32(in);
  std::uint32_t x = LoadLe32(in + 4);
  DecryptWords(x, y);
  StoreLe32(y, out);
  StoreLe32(x, out + 4);
}

struct Aes128::Contexts {
  EVP_CIPHER_CTX* encrypt = nullptr;
  EVP_CIPHER_CTX* decrypt = nullptr;

  ~Contexts() {
    EVP_CIPHER_CTX_free(encrypt);
    EVP_CIPHER_CTX_free(decrypt);
  }
};

Aes128::Aes128(ByteView key) : contexts_(std::make_unique<Contexts>()) {
  CheckKey(key, kKeySize, "AES-128");
  contexts_->encrypt = EVP_CIPHER_CTX_new();
  contexts_->decrypt = EVP_CIPHER_CTX_new();
  if (contexts_->encrypt == nullptr || contexts_->decrypt == nullptr ||
      EVP_EncryptInit_ex(contexts_->encrypt, EVP_aes_128_ecb(), nullptr,
                         key.data(), nullptr) != 1 ||
      EVP_DecryptInit_ex(contexts_->decrypt, EVP_aes_128_ecb(), nullptr,
                         key.data(), nullptr) != 1) {
    throw Error(ErrorCode::kInvalidInput, "AES-128 context setup failed");
  }
  EVP_CIPHER_CTX_set_padding(contexts_->encrypt, 0);
  EVP_CIPHER_CTX_set_padding(contexts_->decrypt, 0);
}

Aes128::~Aes128() = default;
Aes128::Aes128(Aes128&&) noexcept = default;
Aes128& Aes128::operator=(Aes128&&) noexcept = default;

void Aes128::EncryptBlock(const std::uint8_t* in, std::uint8_t* out) const {
  int len = 0;
  EVP_EncryptUpdate(contexts_->encrypt, out, &len, in, kBlockSize);
}

void Aes128::DecryptBlock(const std::uint8_t* in, std::uint8_t* out) const {
  int len = 0;
  EVP_DecryptUpdate(contexts_->decrypt, out, &len, in, kBlockSize);
}

std::array<std::uint8_t, 8> Speck64_128Encrypt(ByteView key, ByteView block) {
  CheckBlock(block, Speck64_128::kBlockSize);
  std::array<std::uint8_t, 8> out{};
  Speck64_128(key).EncryptBlock(block.data(), out.data());
  return out;
}

std::array<std::uint8_t, 8> Speck64_128Decrypt(ByteView key, ByteView block) {
  CheckBlock(block, Speck64_128::kBlockSize);
  std::array<std::uint8_t, 8> out{};
  Speck64_128(key).DecryptBlock(block.data(), out.data());
  return out;
}

std::array<std::uint8_t, 8> Simon64_128Encrypt(ByteView key, ByteView block) {
  CheckBlock(block, Simon64_128::kBlockSize);
  std::array<std::uint8_t, 8> out{};
  Simon64_128(key).EncryptBlock(block.data(), out.data());
  return out;
}

std::array<std::uint8_t, 8> Simon64_128Decrypt(ByteView key, ByteView block) {
  CheckBlock(block, Simon64_128::kBlockSize);
  std::array<std::uint8_t, 8> out{};
  Simon64_128(key).DecryptBlock(block.data(), out.data());
  return out;
}

}  // namespace hydra::crypto
