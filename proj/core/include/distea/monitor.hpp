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

#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "distea/clock.hpp"
#include "distea/model.hpp"

namespace distea {

struct MonitorOptions {
  // Keep every internal event, not just the two timestamps per method.
  bool record_events = false;
  ReceiveRule receive_rule = ReceiveRule::MaxOnly;
};

/// In-process probe sink. Programs call on_entry / on_return /
/// on_returned_into at the corresponding points; each call stamps the
/// process clock and updates that method's row:
///   first_entry  written once, by the first entry;
///   last_return  overwritten by every return or returned-into.
///
/// Probe calls are thread-safe. snapshot() and dump_trace() expect no probe
/// calls in flight.
class Monitor {
 public:
  explicit Monitor(ProcessId process, MonitorOptions options = {});

  Monitor(const Monitor&) = delete;
  Monitor& operator=(const Monitor&) = delete;

  LamportClock on_entry(const MethodId& m);
  // Both throw TraceIntegrityError (without stamping) if `m` was never entered.
  LamportClock on_return(const MethodId& m);
  LamportClock on_returned_into(const MethodId& m);

  ClockCell& clock() noexcept { return clock_; }
  const ProcessId& process() const noexcept { return clock_.process(); }
  bool records_events() const noexcept { return options_.record_events; }

  // Throws TraceIntegrityError if some entered method has not returned.
  ProcessTrace snapshot() const;

  // Writes snapshot() in the distea-trace v1 format. Throws IoError if the
  // stream fails.
  void dump_trace(std::ostream& sink) const;

 private:
  struct Row {
    LamportClock first_entry;
    std::optional<LamportClock> last_return;
  };

  LamportClock on_exit_event(const MethodId& m, InternalEventKind kind);

  MonitorOptions options_;
  ClockCell clock_;
  mutable std::mutex mu_;
  std::map<MethodId, Row> rows_;
  std::vector<InternalEvent> events_;
};

/// RAII entry/return probe pair for instrumenting a method body by hand.
class MethodScope {
 public:
  MethodScope(Monitor& monitor, MethodId method) : monitor_(monitor), method_(std::move(method)) {
    monitor_.on_entry(method_);
  }
  ~MethodScope() { monitor_.on_return(method_); }

  MethodScope(const MethodScope&) = delete;
  MethodScope& operator=(const MethodScope&) = delete;

  // Call right after a callee returns into this method.
  void returned_into() { monitor_.on_returned_into(method_); }

 private:
  Monitor& monitor_;
  MethodId method_;
};

}  // namespace distea
