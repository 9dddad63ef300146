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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "distea/errors.hpp"

namespace distea {

/// Identifies one process of a distributed run. Non-empty, printable, no
/// control characters (it is written verbatim into trace headers).
class ProcessId {
 public:
  explicit ProcessId(std::string name);

  const std::string& str() const noexcept { return name_; }

  friend auto operator<=>(const ProcessId&, const ProcessId&) = default;

 private:
  std::string name_;
};

/// Qualified method name, e.g. "S::getMax". The same name may appear in
/// several processes when they share code.
class MethodId {
 public:
  explicit MethodId(std::string qualified_name);

  const std::string& str() const noexcept { return name_; }

  friend auto operator<=>(const MethodId&, const MethodId&) = default;

 private:
  std::string name_;
};

std::ostream& operator<<(std::ostream& os, const ProcessId& id);
std::ostream& operator<<(std::ostream& os, const MethodId& id);

/// Unitless logical time.
struct LamportClock {
  std::uint64_t value = 0;

  friend auto operator<=>(const LamportClock&, const LamportClock&) = default;
};

std::ostream& operator<<(std::ostream& os, LamportClock c);

enum class InternalEventKind : std::uint8_t { Entry, Return, ReturnedInto };

// Single-letter tags used by the trace and script formats: E, X, I.
char kind_code(InternalEventKind kind) noexcept;
std::optional<InternalEventKind> kind_from_code(char code) noexcept;

enum class CommunicationEventKind : std::uint8_t { Send, Receive };

struct InternalEvent {
  MethodId method;
  InternalEventKind kind;
  LamportClock timestamp;
  ProcessId process;

  friend bool operator==(const InternalEvent&, const InternalEvent&) = default;
};

/// Compressed execution history of one method in one process: the stamp of
/// its first entry and of its latest return or returned-into event.
class MethodRecord {
 public:
  // Throws InvariantError unless last_return > first_entry.
  MethodRecord(MethodId method, LamportClock first_entry, LamportClock last_return);

  const MethodId& method() const noexcept { return method_; }
  LamportClock first_entry() const noexcept { return first_entry_; }
  LamportClock last_return() const noexcept { return last_return_; }

  friend bool operator==(const MethodRecord&, const MethodRecord&) = default;

 private:
  MethodId method_;
  LamportClock first_entry_;
  LamportClock last_return_;
};

using RecordMap = std::map<MethodId, MethodRecord>;

/// Reduces a full internal-event sequence to one record per method. Throws
/// TraceIntegrityError for a return/returned-into with no prior entry, or for
/// a method that was entered but never returned.
RecordMap compress_events(std::span<const InternalEvent> events);

class ProcessTrace {
 public:
  // Records must have unique methods. When full_sequence is given, every
  // event must belong to `process`, stamps must strictly increase, and its
  // compression must equal the records.
  ProcessTrace(ProcessId process, std::vector<MethodRecord> records,
               std::optional<std::vector<InternalEvent>> full_sequence = std::nullopt);

  // Builds records by compressing the sequence, keeping the sequence.
  static ProcessTrace from_events(ProcessId process, std::vector<InternalEvent> events);

  const ProcessId& process() const noexcept { return process_; }
  const RecordMap& records() const noexcept { return records_; }
  const std::optional<std::vector<InternalEvent>>& full_sequence() const noexcept {
    return full_sequence_;
  }

  const MethodRecord* find(const MethodId& m) const;

  // Records ordered by first_entry, the order used on disk.
  std::vector<const MethodRecord*> records_by_entry() const;

  friend bool operator==(const ProcessTrace&, const ProcessTrace&) = default;

 private:
  ProcessId process_;
  RecordMap records_;
  std::optional<std::vector<InternalEvent>> full_sequence_;
};

using MethodSet = std::set<MethodId>;

/// Result of one impact query, split by where the impacted methods ran.
/// Invariants: all = local | remote, common = local & remote.
struct ImpactSet {
  MethodId query;
  ProcessId local_process;
  MethodSet all;
  MethodSet local;
  MethodSet remote;
  MethodSet common;

  static ImpactSet from_parts(MethodId query, ProcessId local_process, MethodSet local,
                              MethodSet remote);

  friend bool operator==(const ImpactSet&, const ImpactSet&) = default;
};

MethodSet set_union(const MethodSet& a, const MethodSet& b);
MethodSet set_intersection(const MethodSet& a, const MethodSet& b);
MethodSet set_difference(const MethodSet& a, const MethodSet& b);
bool is_subset(const MethodSet& inner, const MethodSet& outer);

}  // namespace distea

template <>
struct std::hash<distea::MethodId> {
  std::size_t operator()(const distea::MethodId& m) const noexcept {
    return std::hash<std::string>{}(m.str());
  }
};

template <>
struct std::hash<distea::ProcessId> {
  std::size_t operator()(const distea::ProcessId& p) const noexcept {
    return std::hash<std::string>{}(p.str());
  }
};
