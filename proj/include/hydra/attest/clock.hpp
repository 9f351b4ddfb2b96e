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

#ifndef HYDRA_ATTEST_CLOCK_HPP_
#define HYDRA_ATTEST_CLOCK_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "hydra/common.hpp"

namespace hydra::attest {

// Free-running millisecond counter (the board timer).
class MonotonicCounter {
 public:
  virtual ~MonotonicCounter() = default;
  virtual std::uint64_t NowMs() const = 0;
};

class SteadyCounter final : public MonotonicCounter {
 public:
  std::uint64_t NowMs() const override;
};

// Test and simulation counter, advanced explicitly.
// Milliseconds since the Unix epoch. Used by verifiers to stamp requests.
class WallClockCounter final : public MonotonicCounter {
 public:
  std::uint64_t NowMs() const override;
};

class ManualCounter final : public MonotonicCounter {
 public:
  explicit ManualCounter(std::uint64_t start = 0) : now_(start) {}
  std::uint64_t NowMs() const override { return now_.load(); }
  void Advance(std::uint64_t ms) { now_ += ms; }
  void Set(std::uint64_t ms) { now_ = ms; }

 private:
  std::atomic<std::uint64_t> now_;
};

// Persistent slot holding the last saved timestamp (T_save).
class TimestampStore {
 public:
  virtual ~TimestampStore() = default;
  // nullopt when nothing valid has been saved.
  virtual std::optional<std::uint64_t> Load() const = 0;
  virtual void Save(std::uint64_t timestamp_ms) = 0;
};

class MemoryTimestampStore final : public TimestampStore {
 public:
  std::optional<std::uint64_t> Load() const override { return value_; }
  void Save(std::uint64_t timestamp_ms) override { value_ = timestamp_ms; }

 private:
  std::optional<std::uint64_t> value_;
};

// 12-byte file: u64 big-endian milliseconds, then the CRC-32 of those eight
// bytes as u32 big-endian. A missing or corrupt file loads as nullopt.
class FileTimestampStore final : public TimestampStore {
 public:
  explicit FileTimestampStore(std::string path) : path_(std::move(path)) {}
  std::optional<std::uint64_t> Load() const override;
  void Save(std::uint64_t timestamp_ms) override;

  static Bytes Encode(std::uint64_t timestamp_ms);
  static std::optional<std::uint64_t> Decode(ByteView bytes);

 private:
  std::string path_;
};

// Pseudo real-time clock: anchored at the first validated request after boot
// and advanced by the counter from there.
class ClockState {
 public:
  ClockState(std::uint64_t t_save, std::shared_ptr<const MonotonicCounter> counter,
             std::uint64_t window_ms, std::uint64_t persist_interval_ms,
             bool strictly_increasing = true);

  // Before the anchor: T_R > T_save. After: |T_R - now| <= window and
  // T_R > last accepted T_R. Has no side effects.
  bool CheckFreshness(std::uint64_t t_r) const;
  // Called once a request has passed authentication. The first call anchors
  // the clock at T_first = t_r.
  void RecordAccepted(std::uint64_t t_r);

  std::optional<std::uint64_t> CurrentTime() const;
  // Saves max(current time, last accepted) once persist_interval has elapsed
  // since the previous save. Saved values never decrease. Returns whether a
  // save happened.
  bool PersistIfDue(TimestampStore& store);

  std::uint64_t t_save() const { return t_save_; }
  std::optional<std::uint64_t> t_first() const { return t_first_; }
  std::optional<std::uint64_t> last_accepted() const { return last_accepted_; }
  std::uint64_t window_ms() const { return window_ms_; }

 private:
  std::uint64_t t_save_;
  std::shared_ptr<const MonotonicCounter> counter_;
  std::uint64_t window_ms_;
  std::uint64_t persist_interval_ms_;
  bool strictly_increasing_;
  std::optional<std::uint64_t> t_first_;
  std::uint64_t counter_origin_ = 0;
  std::optional<std::uint64_t> last_accepted_;
  std::optional<std::uint64_t> last_persist_counter_;
  std::uint64_t last_persisted_value_ = 0;
};

}  // namespace hydra::attest

#endif  // HYDRA_ATTEST_CLOCK_HPP_
