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

#include "faultwire/mqtt/client.hpp"

#include <type_traits>
#include <utility>

#include <spdlog/spdlog.h>

namespace faultwire::mqtt {

Client::Client(EventLoop& loop, std::string client_id, SendFn send)
    : loop_(loop), client_id_(std::move(client_id)), send_(std::move(send)) {}

void Client::connect(std::uint16_t keep_alive_s) {
  Connect c;
  c.client_id = client_id_;
  c.keep_alive_s = keep_alive_s;
  send(c);
}

void Client::subscribe(const std::string& filter, std::uint8_t qos) {
  Subscribe s;
  s.packet_id = next_id();
  s.entries.push_back({filter, qos});
  send(s);
}

void Client::unsubscribe(const std::string& filter) {
  Unsubscribe u;
  u.packet_id = next_id();
  u.filters.push_back(filter);
  send(u);
}

void Client::publish(const std::string& topic, const std::string& payload, std::uint8_t qos) {
  Publish p;
  p.topic = topic;
  p.payload = payload;
  p.qos = qos;
  if (qos == 1) {
    p.packet_id = next_id();
    unacked_.insert(*p.packet_id);
  }
  send(p);
}

void Client::ping() { send(Pingreq{}); }

void Client::disconnect() {
  send(Disconnect{});
  connected_ = false;
}

void Client::on_bytes(std::span<const std::uint8_t> bytes) {
  decoder_.feed(bytes);
  try {
    while (auto p = decoder_.next()) handle(*p);
  } catch (const DecodeError& e) {
    spdlog::error("client {}: bad packet from broker: {}", client_id_, e.what());
    connected_ = false;
  }
}

void Client::handle(const Packet& packet) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Connack>) {
          connack_code_ = p.return_code;
          connected_ = p.return_code == ConnectReturnCode::kAccepted;
        } else if constexpr (std::is_same_v<T, Publish>) {
          ++received_;
          if (p.qos == 1) send(Puback{*p.packet_id});
          if (on_message_) on_message_(Message{p.topic, p.payload, loop_.now(), p.qos});
        } else if constexpr (std::is_same_v<T, Puback>) {
          if (unacked_.erase(p.packet_id) == 1) {
            ++pubacks_;
          } else {
            spdlog::warn("client {}: PUBACK for unknown packet id {}", client_id_, p.packet_id);
          }
        } else if constexpr (std::is_same_v<T, Suback>) {
          last_suback_ = p.return_codes;
        } else if constexpr (std::is_same_v<T, Unsuback> || std::is_same_v<T, Pingresp>) {
        } else {
          spdlog::warn("client {}: unexpected {} from broker", client_id_, packet_name(packet));
        }
      },
      packet);
}

void Client::send(const Packet& p) {
  if (send_) send_(encode_packet(p));
}

std::uint16_t Client::next_id() {
  ++packet_id_;
  if (packet_id_ == 0) packet_id_ = 1;
  return packet_id_;
}

}  // namespace faultwire::mqtt
