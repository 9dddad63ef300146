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

#include "distea/clock.hpp"

#include <algorithm>
#include <limits>

namespace distea {

namespace {
constexpr std::uint64_t kMaxClock = std::numeric_limits<std::uint64_t>::max();
}

LamportClock ClockCell::stamp_event() {
  std::uint64_t cur = value_.load(std::memory_order_relaxed);
  do {
    if (cur == kMaxClock) throw ClockOverflowError("logical clock of " + process_.str() + " overflowed");
  } while (!value_.compare_exchange_weak(cur, cur + 1, std::memory_order_acq_rel,
                                         std::memory_order_relaxed));
  return LamportClock{cur};
}

void ClockCell::on_receive(LamportClock received) {
  std::uint64_t cur = value_.load(std::memory_order_relaxed);
  std::uint64_t next = 0;
  do {
    next = std::max(cur, received.value);
    if (rule_ == ReceiveRule::MaxPlusOne) {
      if (next == kMaxClock) throw ClockOverflowError("logical clock of " + process_.str() + " overflowed");
      ++next;
    }
    if (next == cur) return;
  } while (!value_.compare_exchange_weak(cur, next, std::memory_order_acq_rel,
                                         std::memory_order_relaxed));
}

}  // namespace distea
