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

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "distea/byte_stream.hpp"

namespace distea {

struct HostPort {
  std::string host;
  std::uint16_t port = 0;

  // "host:port"; throws InvariantError on malformed input.
  static HostPort parse(const std::string& text);
  std::string to_string() const;
};

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd);
  ~TcpStream() override;

  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  static std::unique_ptr<TcpStream> connect(const HostPort& addr);

  IoResult read_some(std::span<std::byte> buf) override;
  IoResult write_some(std::span<const std::byte> buf) override;

  void set_blocking(bool blocking) override;
  bool blocking() const override { return blocking_; }

  void close_write() override;
  int native_handle() const override { return fd_; }

  // Blocking reads that wait longer than this throw TimeoutError.
  void set_read_timeout(std::chrono::milliseconds timeout);

  std::uint16_t local_port() const;
  std::uint16_t peer_port() const;

 private:
  int fd_;
  bool blocking_ = true;
};

class TcpListener {
 public:
  // Port 0 binds an ephemeral port; see port().
  explicit TcpListener(const HostPort& addr, int backlog = 64);
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  int native_handle() const noexcept { return fd_; }

  // Throws TimeoutError if no peer connects within `timeout`.
  std::unique_ptr<TcpStream> accept(std::optional<std::chrono::milliseconds> timeout = std::nullopt);

 private:
  int fd_;
  std::uint16_t port_ = 0;
};

}  // namespace distea
