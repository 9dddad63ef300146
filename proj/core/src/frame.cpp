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

#include "distea/frame.hpp"

#include <algorithm>
#include <string>

#include "distea/errors.hpp"

namespace distea {
namespace {

void put_be64(std::byte* out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::byte>(v & 0xff);
    v >>= 8;
  }
}

std::uint64_t get_be64(const std::byte* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | std::to_integer<std::uint64_t>(in[i]);
  return v;
}

}  // namespace

std::array<std::byte, kFrameHeaderSize> encode_header(const FrameHeader& header) {
  std::array<std::byte, kFrameHeaderSize> raw{};
  put_be64(raw.data(), header.total_length);
  put_be64(raw.data() + 8, header.clock.value);
  return raw;
}

FrameHeader decode_header(std::span<const std::byte, kFrameHeaderSize> raw) {
  return FrameHeader{get_be64(raw.data()), LamportClock{get_be64(raw.data() + 8)}};
}

Bytes encode_frame(LamportClock clock, std::span<const std::byte> payload) {
  Bytes frame(kFrameHeaderSize + payload.size());
  auto header = encode_header(FrameHeader{frame.size(), clock});
  std::copy(header.begin(), header.end(), frame.begin());
  std::copy(payload.begin(), payload.end(), frame.begin() + kFrameHeaderSize);
  return frame;
}

Bytes encode_frame(ClockPort& port, std::span<const std::byte> payload) {
  return encode_frame(port.clock_for_send(), payload);
}

std::size_t FrameDecoder::feed(std::span<const std::byte> chunk, ClockPort& port, Bytes& payload_out,
                               std::vector<LamportClock>* clocks_out) {
  if (poisoned_) throw ProtocolError("framer is poisoned by an earlier malformed header");

  std::size_t headers = 0;
  while (!chunk.empty()) {
    if (remaining_ > 0) {
      auto n = static_cast<std::size_t>(std::min<std::uint64_t>(remaining_, chunk.size()));
      payload_out.insert(payload_out.end(), chunk.begin(), chunk.begin() + n);
      remaining_ -= n;
      chunk = chunk.subspan(n);
      continue;
    }

    auto n = std::min(kFrameHeaderSize - header_fill_, chunk.size());
    std::copy_n(chunk.begin(), n, header_.begin() + header_fill_);
    header_fill_ += n;
    chunk = chunk.subspan(n);
    if (header_fill_ < kFrameHeaderSize) break;

    header_fill_ = 0;
    auto header = decode_header(header_);
    if (header.total_length < kFrameHeaderSize) {
      poisoned_ = true;
      throw ProtocolError("frame total_length " + std::to_string(header.total_length) +
                          " is shorter than the 16-byte header");
    }
    remaining_ = header.total_length - kFrameHeaderSize;
    ++frames_seen_;
    ++headers;
    port.clock_received(header.clock);
    if (clocks_out) clocks_out->push_back(header.clock);
  }
  return headers;
}

FrameDecoder::Output FrameDecoder::feed(std::span<const std::byte> chunk, ClockPort& port) {
  Output out;
  feed(chunk, port, out.payload, &out.clocks);
  return out;
}

}  // namespace distea
