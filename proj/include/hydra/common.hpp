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

#ifndef HYDRA_COMMON_HPP_
#define HYDRA_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hydra {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class ErrorCode {
  kInvalidInput,
  kAccessDenied,
  kGrantWithoutCapability,
  kPriorityEscalation,
  kNoGrantRight,
  kRangeOutOfBounds,
  kUnknownProcess,
  kResourceExhausted,
  kProtocolError,
  kBootRefused,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

std::string ToHex(ByteView bytes);
// Accepts upper or lower case; surrounding whitespace is ignored.
Bytes FromHex(std::string_view hex);

inline ByteView AsBytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Big-endian helpers used by every on-wire and on-disk format.
void AppendU32(Bytes& out, std::uint32_t v);
void AppendU64(Bytes& out, std::uint64_t v);
std::uint32_t LoadU32(ByteView in);
std::uint64_t LoadU64(ByteView in);

Bytes ReadFile(const std::string& path);
void WriteFile(const std::string& path, ByteView data);

}  // namespace hydra

#endif  // HYDRA_COMMON_HPP_
