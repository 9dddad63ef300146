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

// Piggyback wire format. Each application write becomes one frame:
//
//   offset  size  field
//   0       8     total_length  big-endian u64, header + payload bytes (>= 16)
//   8       8     clock         big-endian u64, sender's Lamport clock at send
//   16      n     payload       application bytes, untouched
//
// Sending does not advance the sender's clock. A receiver applies each
// header's clock exactly once, as soon as the 16 header bytes are complete.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "distea/bytes.hpp"
#include "distea/clock.hpp"

namespace distea {

inline constexpr std::size_t kFrameHeaderSize = 16;

struct FrameHeader {
  std::uint64_t total_length = kFrameHeaderSize;
  LamportClock clock;

  friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

std::array<std::byte, kFrameHeaderSize> encode_header(const FrameHeader& header);
FrameHeader decode_header(std::span<const std::byte, kFrameHeaderSize> raw);

Bytes encode_frame(LamportClock clock, std::span<const std::byte> payload);

// Piggybacks the port's current send clock. Does not advance it.
Bytes encode_frame(ClockPort& port, std::span<const std::byte> payload);

/// Receive-side framer state for one direction of one connection.
///
/// Accepts raw reads of any size and alignment: reads may split a header,
/// end mid-payload, or span several frames. Only payload bytes come out.
class FrameDecoder {
 public:
  struct Output {
    Bytes payload;
    std::vector<LamportClock> clocks;
  };

  // Strips headers from `chunk`, appends payload bytes to `payload_out`, and
  // hands each completed header's clock to `port`. Returns the number of
  // headers completed. A header with total_length < 16 throws ProtocolError
  // and poisons the decoder; later calls throw as well.
  std::size_t feed(std::span<const std::byte> chunk, ClockPort& port, Bytes& payload_out,
                   std::vector<LamportClock>* clocks_out = nullptr);

  Output feed(std::span<const std::byte> chunk, ClockPort& port);

  // Payload bytes of the current frame not yet seen.
  std::uint64_t remaining() const noexcept { return remaining_; }
  std::size_t partial_header_size() const noexcept { return header_fill_; }
  bool at_frame_boundary() const noexcept { return remaining_ == 0 && header_fill_ == 0; }
  bool poisoned() const noexcept { return poisoned_; }
  std::uint64_t frames_seen() const noexcept { return frames_seen_; }

 private:
  std::array<std::byte, kFrameHeaderSize> header_{};
  std::size_t header_fill_ = 0;
  std::uint64_t remaining_ = 0;
  std::uint64_t frames_seen_ = 0;
  bool poisoned_ = false;
};

}  // namespace distea
