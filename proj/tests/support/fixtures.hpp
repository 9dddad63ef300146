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

// Shared fixtures: the two-component client/server example and its
// expected full event table.

#include <string>
#include <tuple>
#include <vector>

#include "distea/model.hpp"
#include "distea/script.hpp"

namespace distea::testing {

inline std::string source_path(const std::string& rel) { return std::string(DISTEA_SOURCE_DIR) + "/" + rel; }

inline std::vector<ScriptedProgram> example_e_programs() {
  return {read_script_file(source_path("scripts/e-server.script")),
          read_script_file(source_path("scripts/e-client.script"))};
}

using Row = std::tuple<const char*, char, std::uint64_t>;

// Every stamped internal event per process, in order.
inline const std::vector<Row> kTable1Server = {
    {"S::main", 'E', 0},    {"S::init", 'E', 1},    {"S::init", 'I', 2},    {"S::init", 'X', 3},
    {"S::main", 'I', 4},    {"S::serve", 'E', 5},   {"S::getMax", 'E', 10}, {"S::getMax", 'I', 11},
    {"S::getMax", 'X', 12}, {"S::serve", 'I', 13},  {"S::serve", 'X', 14},  {"S::main", 'I', 15},
    {"S::main", 'X', 16},
};

inline const std::vector<Row> kTable1Client = {
    {"C::main", 'E', 0},     {"C::init", 'E', 1},     {"C::init", 'I', 2},    {"C::init", 'X', 3},
    {"C::main", 'I', 4},     {"C::compute", 'E', 5},  {"C::shuffle", 'E', 6}, {"C::shuffle", 'I', 7},
    {"C::shuffle", 'X', 8},  {"C::compute", 'I', 9},  {"C::compute", 'X', 14}, {"C::main", 'I', 15},
    {"C::main", 'X', 16},
};

inline std::vector<InternalEvent> table_events(const std::vector<Row>& rows, const std::string& process) {
  std::vector<InternalEvent> out;
  for (const auto& [m, k, ts] : rows) {
    out.push_back({MethodId(m), *kind_from_code(k), LamportClock{ts}, ProcessId(process)});
  }
  return out;
}

inline MethodSet methods(std::initializer_list<const char*> names) {
  MethodSet out;
  for (const auto* n : names) out.emplace(n);
  return out;
}

}  // namespace distea::testing
