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

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "faultwire/core/realtime_loop.hpp"
#include "faultwire/mqtt/broker.hpp"
#include "faultwire/mqtt/client.hpp"

namespace faultwire::mqtt {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// TCP listener feeding a Broker. Socket reads happen on per-connection
/// threads; everything touching the broker is posted to the loop, which is the
/// single serialized command queue.
class TcpServer {
 public:
  TcpServer(RealtimeLoop& loop, Broker& broker, std::uint16_t port,
            std::string bind_address = "127.0.0.1");
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  /// Binds and starts accepting. Throws TransportError if the port is taken.
  void start();
  void stop();

  std::uint16_t port() const { return port_; }

 private:
  struct Connection;

  void accept_loop();
  void schedule_keep_alive();

  RealtimeLoop& loop_;
  Broker& broker_;
  std::uint16_t port_;
  std::string bind_address_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::shared_ptr<Connection>> connections_;
  std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

/// An MQTT client connected to a broker over TCP. Inbound bytes are posted to
/// the loop before reaching the Client.
class TcpClientConnection {
 public:
  TcpClientConnection(RealtimeLoop& loop, const std::string& host, std::uint16_t port,
                      std::string client_id);
  ~TcpClientConnection();

  TcpClientConnection(const TcpClientConnection&) = delete;
  TcpClientConnection& operator=(const TcpClientConnection&) = delete;

  Client& client() { return *client_; }
  void close();

 private:
  struct Shared {
    int fd = -1;
    std::atomic<bool> open{true};
  };

  RealtimeLoop& loop_;
  std::shared_ptr<Shared> shared_ = std::make_shared<Shared>();
  std::unique_ptr<Client> client_;
  std::thread reader_;
};

}  // namespace faultwire::mqtt
