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

// distea-trace v1: one file per process, line oriented, '\n' terminated.
//
//   distea-trace v1
//   process <ProcessId>
//   <MethodId>\t<first_entry>\t<last_return>      one per method, by first_entry
//   #events                                        optional, full-sequence mode
//   <MethodId>\t<E|X|I>\t<timestamp>              one per internal event, in order

#include <cstddef>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "distea/model.hpp"

namespace distea {

inline constexpr std::string_view kTraceMagic = "distea-trace v1";

std::string serialize_trace(const ProcessTrace& trace);
void write_trace(std::ostream& out, const ProcessTrace& trace);

// Throws ParseError carrying the offending line number.
ProcessTrace parse_trace(std::string_view text);

ProcessTrace read_trace_file(const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path, const ProcessTrace& trace);

// File name used for a process's trace: the id with characters outside
// [A-Za-z0-9._-] replaced by '_', plus ".trace".
std::string trace_file_name(const ProcessId& process);

// All *.trace files directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> gather_trace_files(const std::filesystem::path& dir);

/// Traces of every process of one run, keyed by process.
class TraceCorpus {
 public:
  TraceCorpus(std::string run_id, std::map<ProcessId, ProcessTrace> traces)
      : run_id_(std::move(run_id)), traces_(std::move(traces)) {}

  const std::string& run_id() const noexcept { return run_id_; }
  const std::map<ProcessId, ProcessTrace>& traces() const noexcept { return traces_; }
  std::size_t process_count() const noexcept { return traces_.size(); }
  std::size_t record_count() const;

  const ProcessTrace* find(const ProcessId& p) const;

  friend bool operator==(const TraceCorpus&, const TraceCorpus&) = default;

 private:
  std::string run_id_;
  std::map<ProcessId, ProcessTrace> traces_;
};

// Throws InvariantError if `traces` is empty or two traces share a process.
// Timestamps are kept as recorded.
TraceCorpus merge(std::vector<ProcessTrace> traces, std::string run_id = "run");

}  // namespace distea
