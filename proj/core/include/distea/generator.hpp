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

#include <cstdint>
#include <vector>

#include "distea/script.hpp"

namespace distea {

struct GeneratorParams {
  std::size_t min_processes = 2;
  std::size_t max_processes = 4;
  // Methods per process, counting its main.
  std::size_t min_methods = 5;
  std::size_t max_methods = 30;
  // "lib::gN" methods any process may call, giving shared names.
  std::size_t shared_methods = 3;
  std::size_t max_depth = 6;
  std::size_t max_spawns = 2;
};

/// Random well-formed programs: connected topology, balanced call nesting,
/// every sent message received. Deterministic in `seed`. The interleaving
/// they are generated from is a valid schedule, so no run can deadlock.
/// Only initial threads communicate; spawned threads make local calls.
std::vector<ScriptedProgram> generate_scripts(std::uint64_t seed, const GeneratorParams& params = {});

}  // namespace distea
