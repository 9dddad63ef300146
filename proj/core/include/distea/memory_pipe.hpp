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
#include <memory>
#include <optional>
#include <utility>

#include "distea/byte_stream.hpp"

namespace distea {

struct MemoryPipeOptions {
  // Bytes buffered per direction before writes block; 0 means unbounded.
  std::size_t capacity = 0;
  // When set, each read returns a pseudo-random prefix of at most
  // max_segment bytes, emulating arbitrary stream segmentation.
  std::optional<std::uint64_t> segment_seed;
  std::size_t max_segment = 16;
};

/// Two connected in-memory endpoints. Thread-safe; blocking reads and writes
/// wait on a condition variable. Destroying an endpoint closes both of its
/// directions: its peer reads end-of-stream and writes fail with IoError.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_memory_pipe(
    const MemoryPipeOptions& options = {});

}  // namespace distea
