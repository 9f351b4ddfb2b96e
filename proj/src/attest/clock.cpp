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

#include "hydra/attest/clock.hpp"

#include <zlib.h>

#include <chrono>
#include <filesystem>
#include <fstream>

namespace hydra::attest {

std::uint64_t SteadyCounter::NowMs() const {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

std::uint64_t WallClockCounter::NowMs() const {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
}

Bytes FileTimestampStore::Encode(std::uint64_t timestamp_ms) {
  Bytes out;
  AppendU64(out, timestamp_ms);
  AppendU32(out, static_cast<std::uint32_t>(crc32(0L, out.data(), 8)));
  return out;
}

std::optional<std::uint64_t> FileTimestampStore::Decode(ByteView bytes) {
  if (bytes.size() != 12) return std::nullopt;
  if (LoadU32(bytes.subspan(8, 4)) != static_cast<std::uint32_t>(crc32(0L, bytes.data(), 8))) {
    return std::nullopt;
  }
  return LoadU64(bytes.subspan(0, 8));
}

std::optional<std::uint64_t> FileTimestampStore::Load() const {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return std::nullopt;
  try {
    return Decode(ReadFile(path_));
  } catch (const Error&) {
    return std::nullopt;
  }
}

void FileTimestampStore::Save(std::uint64_t timestamp_ms) {
  // Write-then-rename so a crash never leaves a half-written slot.
  std::string tmp = path_ + ".tmp";
  WriteFile(tmp, Encode(timestamp_ms));
  std::filesystem::rename(tmp, path_);
}

ClockState::ClockState(std::uint64_t t_save, std::shared_ptr<const MonotonicCounter> counter,
                       std::uint64_t window_ms, std::uint64_t persist_interval_ms,
                       bool strictly_increasing)
    : t_save_(t_save),
      counter_(std::move(counter)),
      window_ms_(window_ms),
      persist_interval_ms_(persist_interval_ms),
      strictly_increasing_(strictly_increasing),
      last_persisted_value_(t_save) {
  if (window_ms_ == 0) throw Error(ErrorCode::kInvalidInput, "freshness window must be positive");
  if (!counter_) throw Error(ErrorCode::kInvalidInput, "clock needs a counter");
}

bool ClockState::CheckFreshness(std::uint64_t t_r) const {
  if (!t_first_) return t_r > t_save_;
  std::uint64_t now = *CurrentTime();
  std::uint64_t distance = t_r > now ? t_r - now : now - t_r;
  if (distance > window_ms_) return false;
  if (strictly_increasing_ && last_accepted_ && t_r <= *last_accepted_) return false;
  return true;
}

void ClockState::RecordAccepted(std::uint64_t t_r) {
  if (!t_first_) {
    t_first_ = t_r;
    counter_origin_ = counter_->NowMs();
  }
  if (!last_accepted_ || t_r > *last_accepted_) last_accepted_ = t_r;
}

std::optional<std::uint64_t> ClockState::CurrentTime() const {
  if (!t_first_) return std::nullopt;
  return *t_first_ + (counter_->NowMs() - counter_origin_);
}

bool ClockState::PersistIfDue(TimestampStore& store) {
  std::optional<std::uint64_t> now = CurrentTime();
  if (!now) return false;
  std::uint64_t counter_now = counter_->NowMs();
  if (last_persist_counter_ && counter_now - *last_persist_counter_ < persist_interval_ms_) {
    return false;
  }
  std::uint64_t value = std::max({*now, last_accepted_.value_or(0), last_persisted_value_});
  store.Save(value);
  last_persisted_value_ = value;
  last_persist_counter_ = counter_now;
  return true;
}

}  // namespace hydra::attest
