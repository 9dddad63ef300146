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

#include "distea/tcp.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "distea/errors.hpp"

namespace distea {
namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw IoError(what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const HostPort& addr) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(addr.host.c_str(), nullptr, &hints, &res); rc != 0) {
    throw IoError("cannot resolve " + addr.host + ": " + ::gai_strerror(rc));
  }
  sockaddr_in sa{};
  std::memcpy(&sa, res->ai_addr, sizeof(sa));
  ::freeaddrinfo(res);
  sa.sin_port = htons(addr.port);
  return sa;
}

std::uint16_t port_of(int fd, bool peer) {
  sockaddr_in sa{};
  socklen_t len = sizeof(sa);
  int rc = peer ? ::getpeername(fd, reinterpret_cast<sockaddr*>(&sa), &len)
                : ::getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len);
  if (rc != 0) throw_errno(peer ? "getpeername" : "getsockname");
  return ntohs(sa.sin_port);
}

}  // namespace

HostPort HostPort::parse(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw InvariantError("expected host:port, got '" + text + "'");
  }
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvariantError("bad port in '" + text + "'");
  }
  if (port > 65535) throw InvariantError("port out of range in '" + text + "'");
  return HostPort{text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

std::string HostPort::to_string() const { return host + ":" + std::to_string(port); }

TcpStream::TcpStream(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpStream> TcpStream::connect(const HostPort& addr) {
  auto sa = resolve(addr);
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw_errno("socket");
  auto stream = std::make_unique<TcpStream>(fd);
  while (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
    if (errno == EINTR) continue;
    throw_errno("connect to " + addr.to_string());
  }
  return stream;
}

IoResult TcpStream::read_some(std::span<std::byte> buf) {
  if (buf.empty()) return IoResult::ok(0);
  for (;;) {
    ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n > 0) return IoResult::ok(static_cast<std::size_t>(n));
    if (n == 0) return IoResult::eof();
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (blocking_) throw TimeoutError("read timed out");
      return IoResult::would_block();
    }
    throw_errno("recv");
  }
}

IoResult TcpStream::write_some(std::span<const std::byte> buf) {
  if (buf.empty()) return IoResult::ok(0);
  for (;;) {
    ssize_t n = ::send(fd_, buf.data(), buf.size(), MSG_NOSIGNAL);
    if (n >= 0) return IoResult::ok(static_cast<std::size_t>(n));
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (blocking_) throw TimeoutError("write timed out");
      return IoResult::would_block();
    }
    throw_errno("send");
  }
}

void TcpStream::set_blocking(bool blocking) {
  int flags = ::fcntl(fd_, F_GETFL, 0);
  if (flags < 0) throw_errno("fcntl");
  flags = blocking ? (flags & ~O_NONBLOCK) : (flags | O_NONBLOCK);
  if (::fcntl(fd_, F_SETFL, flags) != 0) throw_errno("fcntl");
  blocking_ = blocking;
}

void TcpStream::close_write() { ::shutdown(fd_, SHUT_WR); }

void TcpStream::set_read_timeout(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  if (::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv)) != 0) throw_errno("setsockopt");
}

std::uint16_t TcpStream::local_port() const { return port_of(fd_, false); }
std::uint16_t TcpStream::peer_port() const { return port_of(fd_, true); }

TcpListener::TcpListener(const HostPort& addr, int backlog) {
  auto sa = resolve(addr);
  fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw_errno("socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0 || ::listen(fd_, backlog) != 0) {
    int saved = errno;
    ::close(fd_);
    errno = saved;
    throw_errno("listen on " + addr.to_string());
  }
  port_ = port_of(fd_, false);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpStream> TcpListener::accept(std::optional<std::chrono::milliseconds> timeout) {
  if (timeout) {
    pollfd p{fd_, POLLIN, 0};
    int rc = 0;
    do {
      rc = ::poll(&p, 1, static_cast<int>(timeout->count()));
    } while (rc < 0 && errno == EINTR);
    if (rc < 0) throw_errno("poll");
    if (rc == 0) throw TimeoutError("accept timed out");
  }
  for (;;) {
    int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) return std::make_unique<TcpStream>(fd);
    if (errno == EINTR) continue;
    throw_errno("accept");
  }
}

}  // namespace distea
