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

#include "distea/monitor.hpp"

#include "distea/trace_store.hpp"

namespace distea {

Monitor::Monitor(ProcessId process, MonitorOptions options)
    : options_(options), clock_(std::move(process), options.receive_rule) {}

LamportClock Monitor::on_entry(const MethodId& m) {
  std::lock_guard lk(mu_);
  auto ts = clock_.stamp_event();
  rows_.try_emplace(m, Row{ts, std::nullopt});
  if (options_.record_events) events_.push_back({m, InternalEventKind::Entry, ts, clock_.process()});
  return ts;
}

LamportClock Monitor::on_return(const MethodId& m) { return on_exit_event(m, InternalEventKind::Return); }

LamportClock Monitor::on_returned_into(const MethodId& m) {
  return on_exit_event(m, InternalEventKind::ReturnedInto);
}

LamportClock Monitor::on_exit_event(const MethodId& m, InternalEventKind kind) {
  std::lock_guard lk(mu_);
  auto it = rows_.find(m);
  if (it == rows_.end()) {
    throw TraceIntegrityError(std::string(kind == InternalEventKind::Return ? "return from " : "returned-into ") +
                              m.str() + " in " + clock_.process().str() + " before any entry");
  }
  auto ts = clock_.stamp_event();
  it->second.last_return = ts;
  if (options_.record_events) events_.push_back({m, kind, ts, clock_.process()});
  return ts;
}

ProcessTrace Monitor::snapshot() const {
  std::lock_guard lk(mu_);
  std::vector<MethodRecord> records;
  records.reserve(rows_.size());
  for (const auto& [method, row] : rows_) {
    if (!row.last_return) {
      throw TraceIntegrityError("method " + method.str() + " in " + clock_.process().str() +
                                " entered but never returned");
    }
    records.emplace_back(method, row.first_entry, *row.last_return);
  }
  std::optional<std::vector<InternalEvent>> events;
  if (options_.record_events) events = events_;
  return ProcessTrace(clock_.process(), std::move(records), std::move(events));
}

void Monitor::dump_trace(std::ostream& sink) const { write_trace(sink, snapshot()); }

}  // namespace distea
