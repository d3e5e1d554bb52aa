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

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "faultwire/core/event_loop.hpp"
#include "faultwire/mqtt/codec.hpp"
#include "faultwire/mqtt/message.hpp"
#include "faultwire/mqtt/packet.hpp"

namespace faultwire::mqtt {

/// Minimal MQTT 3.1.1 client. Speaks bytes through `send`; inbound bytes are
/// fed with on_bytes(). Like the broker, it belongs to one EventLoop.
class Client {
 public:
  using SendFn = std::function<void(std::vector<std::uint8_t>)>;
  using MessageHandler = std::function<void(const Message&)>;

  Client(EventLoop& loop, std::string client_id, SendFn send);

  void connect(std::uint16_t keep_alive_s = 60);
  void subscribe(const std::string& filter, std::uint8_t qos = 0);
  void unsubscribe(const std::string& filter);
  void publish(const std::string& topic, const std::string& payload, std::uint8_t qos = 0);
  void ping();
  void disconnect();

  void on_bytes(std::span<const std::uint8_t> bytes);
  void set_message_handler(MessageHandler handler) { on_message_ = std::move(handler); }

  const std::string& client_id() const { return client_id_; }
  bool connected() const { return connected_; }
  std::optional<ConnectReturnCode> connack_code() const { return connack_code_; }
  /// qos 1 publishes not yet acknowledged by the broker.
  std::size_t unacked() const { return unacked_.size(); }
  std::uint64_t pubacks_received() const { return pubacks_; }
  std::uint64_t messages_received() const { return received_; }
  const std::vector<std::uint8_t>& last_suback_codes() const { return last_suback_; }

 private:
  void send(const Packet& p);
  std::uint16_t next_id();
  void handle(const Packet& p);

  EventLoop& loop_;
  std::string client_id_;
  SendFn send_;
  StreamDecoder decoder_;
  MessageHandler on_message_;
  bool connected_ = false;
  std::optional<ConnectReturnCode> connack_code_;
  std::uint16_t packet_id_ = 0;
  std::set<std::uint16_t> unacked_;
  std::uint64_t pubacks_ = 0;
  std::uint64_t received_ = 0;
  std::vector<std::uint8_t> last_suback_;
};

}  // namespace faultwire::mqtt
