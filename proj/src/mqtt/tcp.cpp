// Copyright 2026 The Faultwire Authors.
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

#include "faultwire/mqtt/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

#include <spdlog/spdlog.h>

namespace faultwire::mqtt {
namespace {

void write_all(int fd, const std::vector<std::uint8_t>& bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    auto n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return;
    }
    off += static_cast<std::size_t>(n);
  }
}

template <typename OnBytes, typename OnClose>
void read_loop(int fd, const std::atomic<bool>& open, OnBytes on_bytes, OnClose on_close) {
  std::vector<std::uint8_t> buf(16 * 1024);
  while (open.load()) {
    auto n = ::recv(fd, buf.data(), buf.size(), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    on_bytes(std::vector<std::uint8_t>(buf.begin(), buf.begin() + n));
  }
  on_close();
}

}  // namespace

struct TcpServer::Connection {
  int fd = -1;
  std::atomic<bool> open{true};
  std::thread reader;
};

TcpServer::TcpServer(RealtimeLoop& loop, Broker& broker, std::uint16_t port,
                     std::string bind_address)
    : loop_(loop), broker_(broker), port_(port), bind_address_(std::move(bind_address)) {}

TcpServer::~TcpServer() {
  *alive_ = false;
  stop();
}

void TcpServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port_);
  if (::inet_pton(AF_INET, bind_address_.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw TransportError("bad bind address " + bind_address_);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 64) != 0) {
    auto err = std::string(std::strerror(errno));
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw TransportError("cannot listen on " + bind_address_ + ":" + std::to_string(port_) +
                         ": " + err);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
  schedule_keep_alive();
  spdlog::info("broker listening on {}:{}", bind_address_, port_);
}

void TcpServer::schedule_keep_alive() {
  std::weak_ptr<bool> alive = alive_;
  loop_.post_after(Duration{1000}, [this, alive] {
    auto guard = alive.lock();
    if (!guard || !*guard || !running_) return;
    broker_.check_keep_alive();
    schedule_keep_alive();
  });
}

void TcpServer::accept_loop() {
  while (running_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, 100);
    if (rc <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    {
      std::lock_guard<std::mutex> lock(mu_);
      connections_.push_back(conn);
    }
    std::weak_ptr<bool> alive = alive_;
    loop_.post([this, alive, conn] {
      auto guard = alive.lock();
      if (!guard || !*guard) return;
      Broker::Transport t;
      t.send = [conn](std::vector<std::uint8_t> bytes) {
        if (conn->open) write_all(conn->fd, bytes);
      };
      t.close = [conn] {
        conn->open = false;
        ::shutdown(conn->fd, SHUT_RDWR);
      };
      auto id = broker_.open_connection(std::move(t));
      conn->reader = std::thread([this, alive, conn, id] {
        read_loop(
            conn->fd, conn->open,
            [&](std::vector<std::uint8_t> bytes) {
              loop_.post([this, alive, id, bytes = std::move(bytes)] {
                auto g = alive.lock();
                if (g && *g) broker_.on_bytes(id, bytes);
              });
            },
            [&] {
              loop_.post([this, alive, id] {
                auto g = alive.lock();
                if (g && *g) broker_.on_transport_closed(id);
              });
            });
      });
    });
  }
}

void TcpServer::stop() {
  if (!running_.exchange(false)) return;
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
  std::vector<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard<std::mutex> lock(mu_);
    conns.swap(connections_);
  }
  for (auto& c : conns) {
    c->open = false;
    ::shutdown(c->fd, SHUT_RDWR);
  }
  // Readers are started from loop tasks; the loop must be stopped by now or
  // they may still be spawning. Join whatever exists.
  for (auto& c : conns) {
    if (c->reader.joinable()) c->reader.join();
    ::close(c->fd);
  }
}

TcpClientConnection::TcpClientConnection(RealtimeLoop& loop, const std::string& host,
                                         std::uint16_t port, std::string client_id)
    : loop_(loop) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || res == nullptr) {
    throw TransportError("cannot resolve " + host);
  }
  int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0 || ::connect(fd, res->ai_addr, res->ai_addrlen) != 0) {
    auto err = std::string(std::strerror(errno));
    ::freeaddrinfo(res);
    if (fd >= 0) ::close(fd);
    throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " + err);
  }
  ::freeaddrinfo(res);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  shared_->fd = fd;

  auto shared = shared_;
  client_ = std::make_unique<Client>(loop_, std::move(client_id),
                                     [shared](std::vector<std::uint8_t> bytes) {
                                       if (shared->open) write_all(shared->fd, bytes);
                                     });
  Client* client = client_.get();
  reader_ = std::thread([this, shared, client] {
    read_loop(
        shared->fd, shared->open,
        [&](std::vector<std::uint8_t> bytes) {
          loop_.post([shared, client, bytes = std::move(bytes)] {
            if (shared->open) client->on_bytes(bytes);
          });
        },
        [] {});
  });
}

TcpClientConnection::~TcpClientConnection() {
  close();
  if (reader_.joinable()) reader_.join();
  if (shared_->fd >= 0) ::close(shared_->fd);
}

void TcpClientConnection::close() {
  if (!shared_->open.exchange(false)) return;
  ::shutdown(shared_->fd, SHUT_RDWR);
}

}  // namespace faultwire::mqtt
