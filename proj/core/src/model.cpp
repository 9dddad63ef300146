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

#include "distea/model.hpp"

#include <algorithm>
#include <iterator>

namespace distea {
namespace {

bool has_control_chars(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x20 || c == 0x7f; });
}

}  // namespace

ProcessId::ProcessId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw InvariantError("process id must be non-empty");
  if (has_control_chars(name_)) throw InvariantError("process id contains control characters");
}

MethodId::MethodId(std::string qualified_name) : name_(std::move(qualified_name)) {
  if (name_.empty()) throw InvariantError("method id must be non-empty");
  if (has_control_chars(name_)) throw InvariantError("method id contains control characters");
  // '#' opens a section marker in the trace format.
  if (name_.front() == '#') throw InvariantError("method id must not start with '#'");
}

std::ostream& operator<<(std::ostream& os, const ProcessId& id) { return os << id.str(); }
std::ostream& operator<<(std::ostream& os, const MethodId& id) { return os << id.str(); }
std::ostream& operator<<(std::ostream& os, LamportClock c) { return os << c.value; }

char kind_code(InternalEventKind kind) noexcept {
  switch (kind) {
    case InternalEventKind::Entry:
      return 'E';
    case InternalEventKind::Return:
      return 'X';
    case InternalEventKind::ReturnedInto:
      return 'I';
  }
  return '?';
}

std::optional<InternalEventKind> kind_from_code(char code) noexcept {
  switch (code) {
    case 'E':
      return InternalEventKind::Entry;
    case 'X':
      return InternalEventKind::Return;
    case 'I':
      return InternalEventKind::ReturnedInto;
    default:
      return std::nullopt;
  }
}

MethodRecord::MethodRecord(MethodId method, LamportClock first_entry, LamportClock last_return)
    : method_(std::move(method)), first_entry_(first_entry), last_return_(last_return) {
  if (!(last_return_ > first_entry_)) {
    throw InvariantError("record for " + method_.str() + ": last_return " +
                         std::to_string(last_return_.value) + " is not after first_entry " +
                         std::to_string(first_entry_.value));
  }
}

RecordMap compress_events(std::span<const InternalEvent> events) {
  struct Row {
    LamportClock first;
    std::optional<LamportClock> last;
  };
  std::map<MethodId, Row> rows;
  for (const auto& ev : events) {
    auto it = rows.find(ev.method);
    if (ev.kind == InternalEventKind::Entry) {
      if (it == rows.end()) rows.emplace(ev.method, Row{ev.timestamp, std::nullopt});
      continue;
    }
    if (it == rows.end()) {
      throw TraceIntegrityError(std::string(1, kind_code(ev.kind)) + " event for " +
                                ev.method.str() + " without a prior entry");
    }
    it->second.last = ev.timestamp;
  }
  RecordMap out;
  for (auto& [method, row] : rows) {
    if (!row.last) throw TraceIntegrityError("method " + method.str() + " entered but never returned");
    out.emplace(method, MethodRecord(method, row.first, *row.last));
  }
  return out;
}

ProcessTrace::ProcessTrace(ProcessId process, std::vector<MethodRecord> records,
                           std::optional<std::vector<InternalEvent>> full_sequence)
    : process_(std::move(process)), full_sequence_(std::move(full_sequence)) {
  for (auto& r : records) {
    auto method = r.method();
    if (!records_.try_emplace(method, std::move(r)).second) {
      throw InvariantError("duplicate record for method " + method.str());
    }
  }
  if (!full_sequence_) return;

  const InternalEvent* prev = nullptr;
  for (const auto& ev : *full_sequence_) {
    if (ev.process != process_) {
      throw InvariantError("event of process " + ev.process.str() + " in trace of " + process_.str());
    }
    if (prev && !(ev.timestamp > prev->timestamp)) {
      throw InvariantError("event stamps are not strictly increasing at " +
                           std::to_string(ev.timestamp.value));
    }
    prev = &ev;
  }
  if (compress_events(*full_sequence_) != records_) {
    throw InvariantError("event sequence of " + process_.str() + " does not compress to its records");
  }
}

ProcessTrace ProcessTrace::from_events(ProcessId process, std::vector<InternalEvent> events) {
  auto compressed = compress_events(events);
  std::vector<MethodRecord> records;
  records.reserve(compressed.size());
  for (auto& [_, r] : compressed) records.push_back(r);
  return ProcessTrace(std::move(process), std::move(records), std::move(events));
}

const MethodRecord* ProcessTrace::find(const MethodId& m) const {
  auto it = records_.find(m);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<const MethodRecord*> ProcessTrace::records_by_entry() const {
  std::vector<const MethodRecord*> out;
  out.reserve(records_.size());
  for (const auto& [_, r] : records_) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const MethodRecord* a, const MethodRecord* b) {
    if (a->first_entry() != b->first_entry()) return a->first_entry() < b->first_entry();
    return a->method() < b->method();
  });
  return out;
}

ImpactSet ImpactSet::from_parts(MethodId query, ProcessId local_process, MethodSet local,
                                MethodSet remote) {
  ImpactSet s{std::move(query), std::move(local_process), {}, std::move(local), std::move(remote), {}};
  s.all = set_union(s.local, s.remote);
  s.common = set_intersection(s.local, s.remote);
  return s;
}

MethodSet set_union(const MethodSet& a, const MethodSet& b) {
  MethodSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

MethodSet set_intersection(const MethodSet& a, const MethodSet& b) {
  MethodSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

MethodSet set_difference(const MethodSet& a, const MethodSet& b) {
  MethodSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool is_subset(const MethodSet& inner, const MethodSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace distea
