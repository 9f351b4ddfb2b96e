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

#include "hydra/crypto/mac.hpp"

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <array>

#include "hydra/crypto/block_cipher.hpp"
#include "hydra/crypto/cbc_mac.hpp"

namespace hydra::crypto {

std::string_view MacAlgorithmName(MacAlgorithm algorithm) {
  switch (algorithm) {
    case MacAlgorithm::kSpeck64_128Cbc: return "SPECK_64_128_CBC";
    case MacAlgorithm::kSimon64_128Cbc: return "SIMON_64_128_CBC";
    case MacAlgorithm::kAes128Cbc: return "AES_128_CBC";
    case MacAlgorithm::kHmacSha256: return "HMAC_SHA_256";
    case MacAlgorithm::kBlake2sKeyed: return "BLAKE2S_KEYED";
  }
  return "UNKNOWN";
}

std::optional<MacAlgorithm> ParseMacAlgorithm(std::string_view name) {
  for (MacAlgorithm a : kAllMacAlgorithms) {
    if (MacAlgorithmName(a) == name) return a;
  }
  return std::nullopt;
}

bool IsCipherBased(MacAlgorithm algorithm) {
  return algorithm == MacAlgorithm::kSpeck64_128Cbc ||
         algorithm == MacAlgorithm::kSimon64_128Cbc ||
         algorithm == MacAlgorithm::kAes128Cbc;
}

std::size_t MacKeySize(MacAlgorithm algorithm) {
  return IsCipherBased(algorithm) ? 16 : 32;
}

std::size_t NativeTagSize(MacAlgorithm algorithm) {
  return IsCipherBased(algorithm) ? 16 : 32;
}

MacSpec MacSpec::Default(MacAlgorithm algorithm) {
  return MacSpec{algorithm, NativeTagSize(algorithm)};
}

void MacSpec::Validate() const {
  if (tag_length != 8 && tag_length != 16 && tag_length != 32) {
    throw Error(ErrorCode::kInvalidInput,
                "tag length must be 8, 16 or 32, got " +
                    std::to_string(tag_length));
  }
  if (tag_length > NativeTagSize(algorithm)) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(MacAlgorithmName(algorithm)) +
                    " cannot produce a " + std::to_string(tag_length) +
                    "-byte tag");
  }
}

MacKey::MacKey(MacAlgorithm algorithm, ByteView bytes)
    : algorithm_(algorithm), bytes_(bytes.begin(), bytes.end()) {
  if (bytes_.empty() || bytes_.size() != MacKeySize(algorithm)) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(MacAlgorithmName(algorithm)) + " key must be " +
                    std::to_string(MacKeySize(algorithm)) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
}

MacKey::~MacKey() {
  if (!bytes_.empty()) OPENSSL_cleanse(bytes_.data(), bytes_.size());
}

MacKey::MacKey(const MacKey& other) = default;

MacKey& MacKey::operator=(const MacKey& other) {
  if (this != &other) {
    if (!bytes_.empty()) OPENSSL_cleanse(bytes_.data(), bytes_.size());
    algorithm_ = other.algorithm_;
    bytes_ = other.bytes_;
  }
  return *this;
}

MacKey::MacKey(MacKey&& other) noexcept = default;

MacKey& MacKey::operator=(MacKey&& other) noexcept {
  if (this != &other) {
    if (!bytes_.empty()) OPENSSL_cleanse(bytes_.data(), bytes_.size());
    algorithm_ = other.algorithm_;
    bytes_ = std::move(other.bytes_);
  }
  return *this;
}

class MacState::Engine {
 public:
  virtual ~Engine() = default;
  virtual void Update(ByteView data) = 0;
  virtual Bytes Final() = 0;
};

namespace {

template <typename Cipher>
class CbcMacEngine final : public MacState::Engine {
 public:
  CbcMacEngine(ByteView key, std::uint64_t length) : mac_(key, length) {}

  void Update(ByteView data) override { mac_.Update(data); }

  Bytes Final() override {
    auto tag = mac_.Final();
    return Bytes(tag.begin(), tag.end());
  }

 private:
  CbcMac<Cipher> mac_;
};

EVP_MAC* FetchMac(const char* name) {
  EVP_MAC* mac = EVP_MAC_fetch(nullptr, name, nullptr);
  if (mac == nullptr) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("OpenSSL provider lacks ") + name);
  }
  return mac;
}

EVP_MAC* HmacImpl() {
  static EVP_MAC* mac = FetchMac("HMAC");
  return mac;
}

EVP_MAC* Blake2sImpl() {
  static EVP_MAC* mac = FetchMac("BLAKE2SMAC");
  return mac;
}

// HMAC-SHA-256 and keyed BLAKE2s through the OpenSSL EVP_MAC interface.
class EvpMacEngine final : public MacState::Engine {
 public:
  EvpMacEngine(MacAlgorithm algorithm, ByteView key, std::uint64_t length)
      : declared_length_(length) {
    bool hmac = algorithm == MacAlgorithm::kHmacSha256;
    ctx_ = EVP_MAC_CTX_new(hmac ? HmacImpl() : Blake2sImpl());
    if (ctx_ == nullptr) throw Error(ErrorCode::kInvalidInput, "EVP_MAC_CTX_new");
    char digest[] = "SHA256";
    std::size_t out_size = 32;
    OSSL_PARAM params[2];
    if (hmac) {
      params[0] = OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST,
                                                   digest, 0);
    } else {
      params[0] = OSSL_PARAM_construct_size_t(OSSL_MAC_PARAM_SIZE, &out_size);
    }
    params[1] = OSSL_PARAM_construct_end();
    if (EVP_MAC_init(ctx_, key.data(), key.size(), params) != 1) {
      EVP_MAC_CTX_free(ctx_);
      throw Error(ErrorCode::kInvalidInput, "EVP_MAC_init failed");
    }
  }

  ~EvpMacEngine() override { EVP_MAC_CTX_free(ctx_); }

  void Update(ByteView data) override {
    if (finalized_) throw Error(ErrorCode::kInvalidInput, "MAC already finalized");
    consumed_ += data.size();
    if (consumed_ > declared_length_) {
      throw Error(ErrorCode::kInvalidInput, "MAC input exceeds declared length");
    }
    if (!data.empty()) EVP_MAC_update(ctx_, data.data(), data.size());
  }

  Bytes Final() override {
    if (finalized_) throw Error(ErrorCode::kInvalidInput, "MAC already finalized");
    if (consumed_ != declared_length_) {
      throw Error(ErrorCode::kInvalidInput,
                  "MAC input length differs from declared length");
    }
    finalized_ = true;
    Bytes out(32);
    std::size_t len = 0;
    if (EVP_MAC_final(ctx_, out.data(), &len, out.size()) != 1) {
      throw Error(ErrorCode::kInvalidInput, "EVP_MAC_final failed");
    }
    out.resize(len);
    return out;
  }

 private:
  EVP_MAC_CTX* ctx_ = nullptr;
  std::uint64_t declared_length_;
  std::uint64_t consumed_ = 0;
  bool finalized_ = false;
};

std::unique_ptr<MacState::Engine> MakeEngine(MacAlgorithm algorithm,
                                             ByteView key,
                                             std::uint64_t length) {
  switch (algorithm) {
    case MacAlgorithm::kSpeck64_128Cbc:
      return std::make_unique<CbcMacEngine<Speck64_128>>(key, length);
    case MacAlgorithm::kSimon64_128Cbc:
      return std::make_unique<CbcMacEngine<Simon64_128>>(key, length);
    case MacAlgorithm::kAes128Cbc:
      return std::make_unique<CbcMacEngine<Aes128>>(key, length);
    case MacAlgorithm::kHmacSha256:
    case MacAlgorithm::kBlake2sKeyed:
      return std::make_unique<EvpMacEngine>(algorithm, key, length);
  }
  throw Error(ErrorCode::kInvalidInput, "unknown MAC algorithm");
}

}  // namespace

MacState::MacState(const MacSpec& spec, const MacKey& key,
                   std::uint64_t message_length)
    : spec_(spec) {
  spec_.Validate();
  if (key.algorithm() != spec.algorithm) {
    throw Error(ErrorCode::kInvalidInput, "key belongs to a different MAC");
  }
  engine_ = MakeEngine(spec.algorithm, key.bytes(), message_length);
}

MacState::~MacState() = default;
MacState::MacState(MacState&&) noexcept = default;
MacState& MacState::operator=(MacState&&) noexcept = default;

void MacState::Update(ByteView data) {
  if (!engine_) throw Error(ErrorCode::kInvalidInput, "MAC state consumed");
  engine_->Update(data);
}

Bytes MacState::Final() {
  if (!engine_) throw Error(ErrorCode::kInvalidInput, "MAC state consumed");
  Bytes tag = engine_->Final();
  engine_.reset();
  tag.resize(spec_.tag_length);
  return tag;
}

Bytes ComputeMac(const MacSpec& spec, const MacKey& key, ByteView message) {
  MacState state(spec, key, message.size());
  state.Update(message);
  return state.Final();
}

MacKey DeriveAuthKey(const MacKey& master) {
  MacSpec native = MacSpec::Default(master.algorithm());
  Bytes derived = ComputeMac(native, master, AsBytes(kAuthKeyContext));
  derived.resize(MacKeySize(master.algorithm()));
  MacKey out(master.algorithm(), derived);
  OPENSSL_cleanse(derived.data(), derived.size());
  if (ConstantTimeEquals(out.bytes(), master.bytes())) {
    throw Error(ErrorCode::kInvalidInput, "derived key equals master key");
  }
  return out;
}

Bytes HmacSha256(ByteView key, ByteView message) {
  if (key.empty()) throw Error(ErrorCode::kInvalidInput, "empty HMAC key");
  EvpMacEngine engine(MacAlgorithm::kHmacSha256, key, message.size());
  engine.Update(message);
  return engine.Final();
}

Bytes Blake2sKeyed(ByteView key, ByteView message) {
  if (key.empty() || key.size() > 32) {
    throw Error(ErrorCode::kInvalidInput, "BLAKE2s key must be 1..32 bytes");
  }
  EvpMacEngine engine(MacAlgorithm::kBlake2sKeyed, key, message.size());
  engine.Update(message);
  return engine.Final();
}

bool ConstantTimeEquals(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace hydra::crypto
