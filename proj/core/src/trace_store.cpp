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

#include "distea/trace_store.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace distea {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

std::uint64_t parse_u64(std::string_view s, std::size_t line_no, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

template <typename Id>
Id parse_id(std::string_view s, std::size_t line_no) {
  try {
    return Id(std::string(s));
  } catch (const InvariantError& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace

void write_trace(std::ostream& out, const ProcessTrace& trace) {
  out << kTraceMagic << '\n' << "process " << trace.process().str() << '\n';
  for (const auto* r : trace.records_by_entry()) {
    out << r->method().str() << '\t' << r->first_entry().value << '\t' << r->last_return().value << '\n';
  }
  if (const auto& events = trace.full_sequence()) {
    out << "#events\n";
    for (const auto& ev : *events) {
      out << ev.method.str() << '\t' << kind_code(ev.kind) << '\t' << ev.timestamp.value << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("failed writing trace of " + trace.process().str());
}

std::string serialize_trace(const ProcessTrace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return std::move(os).str();
}

ProcessTrace parse_trace(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        lines.push_back(text.substr(start));
        break;
      }
      lines.push_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  if (lines.empty()) throw ParseError(1, "empty trace");
  if (lines[0] != kTraceMagic) {
    if (lines[0].starts_with("distea-trace ")) {
      throw ParseError(1, "unsupported trace version '" + std::string(lines[0].substr(13)) + "'");
    }
    throw ParseError(1, "not a distea trace");
  }
  if (lines.size() < 2 || !lines[1].starts_with("process ")) throw ParseError(2, "expected 'process <id>'");
  auto process = parse_id<ProcessId>(lines[1].substr(8), 2);

  std::vector<MethodRecord> records;
  std::set<MethodId> seen;
  std::optional<std::vector<InternalEvent>> events;
  std::size_t events_line = 0;

  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = lines[i];
    if (line == "#events") {
      if (events) throw ParseError(line_no, "duplicate #events section");
      events.emplace();
      events_line = line_no;
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 tab-separated fields");
    auto method = parse_id<MethodId>(fields[0], line_no);

    if (!events) {
      if (!seen.insert(method).second) throw ParseError(line_no, "duplicate record for " + method.str());
      auto first = LamportClock{parse_u64(fields[1], line_no, "first_entry")};
      auto last = LamportClock{parse_u64(fields[2], line_no, "last_return")};
      try {
        records.emplace_back(std::move(method), first, last);
      } catch (const InvariantError& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }

    if (fields[1].size() != 1 || !kind_from_code(fields[1][0])) {
      throw ParseError(line_no, "bad event kind '" + std::string(fields[1]) + "'");
    }
    auto ts = LamportClock{parse_u64(fields[2], line_no, "timestamp")};
    events->push_back({std::move(method), *kind_from_code(fields[1][0]), ts, process});
  }

  try {
    return ProcessTrace(std::move(process), std::move(records), std::move(events));
  } catch (const Error& e) {
    throw ParseError(events_line ? events_line : lines.size(), e.what());
  }
}

ProcessTrace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_trace(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void write_trace_file(const std::filesystem::path& path, const ProcessTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create trace " + path.string());
  write_trace(out, trace);
}

std::string trace_file_name(const ProcessId& process) {
  std::string name = process.str();
  for (char& c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
              c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return name + ".trace";
}

std::vector<std::filesystem::path> gather_trace_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trace") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t TraceCorpus::record_count() const {
  std::size_t n = 0;
  for (const auto& [_, t] : traces_) n += t.records().size();
  return n;
}

const ProcessTrace* TraceCorpus::find(const ProcessId& p) const {
  auto it = traces_.find(p);
  return it == traces_.end() ? nullptr : &it->second;
}

TraceCorpus merge(std::vector<ProcessTrace> traces, std::string run_id) {
  if (traces.empty()) throw InvariantError("merge needs at least one trace");
  std::map<ProcessId, ProcessTrace> by_process;
  for (auto& t : traces) {
    auto id = t.process();
    if (!by_process.try_emplace(id, std::move(t)).second) {
      throw InvariantError("duplicate process " + id.str() + " in merge");
    }
  }
  return TraceCorpus(std::move(run_id), std::move(by_process));
}

}  // namespace distea
