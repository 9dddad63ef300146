// Copyright 2026 The distea Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdint>

#include "distea/model.hpp"

namespace distea {

// How a received clock is folded into the local one.
//   MaxOnly:    C = max(C, ts); the next internal event stamps C.
//   MaxPlusOne: C = max(C, ts) + 1, the textbook Lamport receive rule.
// Both satisfy the clock condition; MaxOnly is the default.
enum class ReceiveRule : std::uint8_t { MaxOnly, MaxPlusOne };

/// Where a connection gets the clock to piggyback on a send, and where it
/// delivers clocks found in received frame headers.
class ClockPort {
 public:
  virtual ~ClockPort() = default;

  virtual LamportClock clock_for_send() = 0;
  virtual void clock_received(LamportClock ts) = 0;
};

/// Per-process Lamport clock. Stamping and receive-merging are atomic, so one
/// cell may be shared by every thread and connection of a process.
class ClockCell final : public ClockPort {
 public:
  explicit ClockCell(ProcessId process, ReceiveRule rule = ReceiveRule::MaxOnly)
      : process_(std::move(process)), rule_(rule) {}

  ClockCell(const ClockCell&) = delete;
  ClockCell& operator=(const ClockCell&) = delete;

  // Returns the current value and advances the clock by one.
  // Throws ClockOverflowError instead of wrapping.
  LamportClock stamp_event();

  LamportClock current() const noexcept { return LamportClock{value_.load(std::memory_order_acquire)}; }

  void on_receive(LamportClock received);

  const ProcessId& process() const noexcept { return process_; }
  ReceiveRule receive_rule() const noexcept { return rule_; }

  // Sending does not advance the clock.
  LamportClock clock_for_send() override { return current(); }
  void clock_received(LamportClock ts) override { on_receive(ts); }

 private:
  ProcessId process_;
  ReceiveRule rule_;
  std::atomic<std::uint64_t> value_{0};
};

}  // namespace distea
