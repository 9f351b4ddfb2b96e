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

#include "hydra/proto/verifier.hpp"

#include "json.hpp"

namespace hydra::proto {
namespace {

using json = nlohmann::json;

crypto::MacSpec SpecFromJson(const json& doc) {
  auto name = doc.at("mac").get<std::string>();
  auto algorithm = crypto::ParseMacAlgorithm(name);
  if (!algorithm) throw Error(ErrorCode::kInvalidInput, "unknown MAC '" + name + "'");
  crypto::MacSpec spec = crypto::MacSpec::Default(*algorithm);
  if (doc.contains("tag_length")) spec.tag_length = doc.at("tag_length").get<std::size_t>();
  spec.Validate();
  return spec;
}

}  // namespace

VerifierKeys::VerifierKeys(const crypto::MacSpec& spec, const crypto::MacKey& attestation_key)
    : spec_(spec), key_(attestation_key), auth_key_(crypto::DeriveAuthKey(attestation_key)) {
  spec_.Validate();
  if (key_.algorithm() != spec_.algorithm) {
    throw Error(ErrorCode::kInvalidInput, "key and MAC algorithm disagree");
  }
}

VerifierKeys VerifierKeys::Parse(std::string_view json_text) {
  try {
    json doc = json::parse(json_text);
    crypto::MacSpec spec = SpecFromJson(doc);
    Bytes raw = FromHex(doc.at("key").get<std::string>());
    return VerifierKeys(spec, crypto::MacKey(spec.algorithm, raw));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("key file: ") + e.what());
  }
}

VerifierKeys VerifierKeys::Load(const std::string& path) {
  Bytes raw = ReadFile(path);
  return Parse(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
}

std::string VerifierKeys::Serialize() const {
  json doc;
  doc["mac"] = std::string(crypto::MacAlgorithmName(spec_.algorithm));
  doc["tag_length"] = spec_.tag_length;
  doc["key"] = ToHex(key_.bytes());
  return doc.dump(2) + "\n";
}

std::uint64_t RequestClock::Next() {
  std::lock_guard lock(mutex_);
  std::uint64_t now = counter_->NowMs();
  if (last_ && now <= *last_) now = *last_ + 1;
  last_ = now;
  return now;
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kTrusted: return "TRUSTED";
    case Verdict::kModified: return "MODIFIED";
    case Verdict::kNoResponse: return "NO_RESPONSE";
    case Verdict::kError: return "ERROR";
  }
  return "?";
}

AttestationRequest BuildRequest(const VerifierKeys& keys, const RequestHeader& header) {
  return AttestationRequest{header,
                            crypto::ComputeMac(keys.spec(), keys.auth_key(), EncodeHeader(header))};
}

Bytes ExpectedTag(const VerifierKeys& keys, const RequestHeader& header, ByteView memory) {
  crypto::MacState mac(keys.spec(), keys.attestation_key(), kHeaderSize + memory.size());
  mac.Update(EncodeHeader(header));
  mac.Update(memory);
  return mac.Final();
}

VerifyResult VerifierAttest(Transport& transport, const VerifierKeys& keys,
                            std::uint32_t process, std::uint64_t first, std::uint64_t last,
                            ByteView expected_image, std::uint64_t timestamp_ms,
                            std::chrono::milliseconds timeout) {
  if (first > last || last >= expected_image.size()) {
    throw Error(ErrorCode::kRangeOutOfBounds, "range outside the expected image");
  }
  RequestHeader header{timestamp_ms, process, first, last};
  Bytes frame = Encode(BuildRequest(keys, header));
  VerifyResult result;
  std::optional<Bytes> reply = transport.RoundTrip(frame, timeout);
  if (!reply) {
    result.detail = "no reply within " + std::to_string(timeout.count()) + " ms";
    return result;
  }
  Message message;
  try {
    message = Decode(*reply);
  } catch (const Error& e) {
    result.detail = std::string("undecodable reply: ") + e.what();
    return result;
  }
  if (auto* err = std::get_if<ErrorResponse>(&message)) {
    if (err->header != header) {
      result.detail = "error reply for a different request";
      return result;
    }
    result.verdict = Verdict::kError;
    result.error = err->code;
    result.detail = std::string(FailureCodeName(err->code));
    return result;
  }
  auto* report = std::get_if<AttestationReport>(&message);
  if (!report || report->header != header) {
    result.detail = "reply does not answer this request";
    return result;
  }
  Bytes expected = ExpectedTag(keys, header, expected_image.subspan(first, last - first + 1));
  result.verdict =
      crypto::ConstantTimeEquals(expected, report->tag) ? Verdict::kTrusted : Verdict::kModified;
  result.report = *report;
  return result;
}

}  // namespace hydra::proto
