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

#include "faultwire/mqtt/broker.hpp"

#include <algorithm>
#include <type_traits>
#include <utility>

#include <spdlog/spdlog.h>

#include "faultwire/mqtt/topic.hpp"

namespace faultwire::mqtt {

Broker::Broker(EventLoop& loop, BrokerOptions options)
    : loop_(loop), options_(std::move(options)) {}

Broker::~Broker() {
  *alive_ = false;
  if (interceptor_ != nullptr) interceptor_->set_async_sink(nullptr);
}

std::size_t Broker::session_count() const {
  return static_cast<std::size_t>(std::count_if(
      sessions_.begin(), sessions_.end(), [](const auto& kv) { return kv.second->connected; }));
}

ConnectionId Broker::open_connection(Transport transport) {
  auto id = next_id_++;
  auto s = std::make_unique<Session>();
  s->id = id;
  s->transport = std::move(transport);
  s->decoder = StreamDecoder(options_.limits);
  s->last_activity = loop_.now();
  sessions_.emplace(id, std::move(s));
  ++stats_.connections;
  return id;
}

void Broker::on_bytes(ConnectionId id, std::span<const std::uint8_t> bytes) {
  Session* s = find(id);
  if (s == nullptr || s->closed) return;
  s->last_activity = loop_.now();
  s->decoder.feed(bytes);
  try {
    while (auto packet = s->decoder.next()) {
      handle(*s, std::move(*packet));
      // handle() may have closed and erased the session.
      s = find(id);
      if (s == nullptr || s->closed) return;
    }
  } catch (const DecodeError& e) {
    ++stats_.protocol_errors;
    spdlog::warn("broker: closing connection {} ({}): {}", id, s->client_id, e.what());
    close(*s);
  }
}

void Broker::on_transport_closed(ConnectionId id) {
  Session* s = find(id);
  if (s == nullptr) return;
  s->transport.close = nullptr;
  close(*s);
}

void Broker::set_interceptor(Interceptor* interceptor) {
  if (interceptor_ != nullptr) interceptor_->set_async_sink(nullptr);
  interceptor_ = interceptor;
  if (interceptor_ == nullptr) return;
  std::weak_ptr<bool> alive = alive_;
  interceptor_->set_async_sink([this, alive](std::vector<Emission> emissions) {
    auto guard = alive.lock();
    if (!guard || !*guard) return;
    dispatch(emissions, Message{}, std::string{}, options_.mirror.has_value());
  });
}

void Broker::check_keep_alive() {
  if (!options_.enforce_keep_alive) return;
  auto now = loop_.now();
  std::vector<ConnectionId> expired;
  for (auto& [id, s] : sessions_) {
    if (!s->connected || s->keep_alive_s == 0) continue;
    auto limit = Duration{static_cast<std::int64_t>(s->keep_alive_s) * 1500};
    if (now - s->last_activity > limit) expired.push_back(id);
  }
  for (auto id : expired) {
    if (Session* s = find(id)) {
      spdlog::info("broker: keep-alive expired for {}", s->client_id);
      close(*s);
    }
  }
}

void Broker::handle(Session& s, Packet packet) {
  if (!s.connected && !std::holds_alternative<Connect>(packet)) {
    throw DecodeError(std::string("first packet must be CONNECT, got ") + packet_name(packet));
  }
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Connect>) {
          if (s.connected) throw DecodeError("second CONNECT on one connection");
          handle_connect(s, p);
        } else if constexpr (std::is_same_v<T, Publish>) {
          handle_publish(s, p);
        } else if constexpr (std::is_same_v<T, Puback>) {
          s.inflight.erase(p.packet_id);
        } else if constexpr (std::is_same_v<T, Subscribe>) {
          handle_subscribe(s, p);
        } else if constexpr (std::is_same_v<T, Unsubscribe>) {
          handle_unsubscribe(s, p);
        } else if constexpr (std::is_same_v<T, Pingreq>) {
          send(s, Pingresp{});
        } else if constexpr (std::is_same_v<T, Disconnect>) {
          close(s);
        } else {
          throw DecodeError(std::string("unexpected client packet ") + packet_name(packet));
        }
      },
      packet);
}

void Broker::handle_connect(Session& s, const Connect& c) {
  auto refuse = [&](ConnectReturnCode rc, const char* why) {
    spdlog::info("broker: refusing CONNECT from '{}': {}", c.client_id, why);
    send(s, Connack{false, rc});
    close(s);
  };
  if (c.protocol_level != 4) return refuse(ConnectReturnCode::kUnacceptableProtocolVersion, "protocol level");
  if (c.will) return refuse(ConnectReturnCode::kNotAuthorized, "wills are not supported");
  if (!c.clean_session) {
    return refuse(ConnectReturnCode::kNotAuthorized, "persistent sessions are not supported");
  }

  std::string client_id = c.client_id;
  if (client_id.empty()) client_id = "auto-" + std::to_string(++auto_client_ids_);
  if (Session* old = find_client(client_id); old != nullptr && old != &s) {
    spdlog::info("broker: client '{}' taken over by a new connection", client_id);
    close(*old);
  }
  s.client_id = std::move(client_id);
  s.connected = true;
  s.keep_alive_s = c.keep_alive_s;
  send(s, Connack{false, ConnectReturnCode::kAccepted});
}

void Broker::handle_subscribe(Session& s, const Subscribe& sub) {
  Suback ack;
  ack.packet_id = sub.packet_id;
  for (const auto& e : sub.entries) {
    if (!is_valid_topic_filter(e.filter) || e.qos > 1) {
      ack.return_codes.push_back(kSubackFailure);
      continue;
    }
    auto it = std::find_if(subscriptions_.begin(), subscriptions_.end(), [&](const Subscription& x) {
      return x.client_id == s.client_id && x.filter == e.filter;
    });
    if (it != subscriptions_.end()) {
      it->qos = e.qos;
    } else {
      subscriptions_.push_back(Subscription{s.client_id, e.filter, e.qos});
    }
    ack.return_codes.push_back(e.qos);
  }
  send(s, ack);
}

void Broker::handle_unsubscribe(Session& s, const Unsubscribe& unsub) {
  for (const auto& f : unsub.filters) {
    std::erase_if(subscriptions_, [&](const Subscription& x) {
      return x.client_id == s.client_id && x.filter == f;
    });
  }
  send(s, Unsuback{unsub.packet_id});
}

void Broker::handle_publish(Session& s, const Publish& pub) {
  ++stats_.publishes_in;
  if (pub.qos == 1) send(s, Puback{*pub.packet_id});

  Message m{pub.topic, pub.payload, loop_.now(), pub.qos};
  if (interceptor_ == nullptr) {
    route_now(m, RouteOrigin::kClient, s.client_id);
    return;
  }
  if (options_.mirror) {
    route_now(m, RouteOrigin::kClient, s.client_id);
    if (!topic_matches(options_.mirror->filter, m.topic)) return;
    dispatch(interceptor_->intercept(m, m.publish_instant), m, s.client_id, true);
    return;
  }
  dispatch(interceptor_->intercept(m, m.publish_instant), m, s.client_id, false);
}

void Broker::dispatch(const std::vector<Emission>& emissions, const Message& original,
                      const std::string& publisher, bool mirrored) {
  const auto now = loop_.now();
  for (const auto& e : emissions) {
    Message m = e.message;
    RouteOrigin origin = RouteOrigin::kInjected;
    if (mirrored) {
      m.topic = options_.mirror->prefix + m.topic;
    } else if (e.message == original && e.due <= now) {
      origin = RouteOrigin::kClient;
    }
    if (e.due <= now) {
      route_now(m, origin, publisher);
      continue;
    }
    std::weak_ptr<bool> alive = alive_;
    loop_.post_at(e.due, [this, alive, m = std::move(m), origin, publisher] {
      auto guard = alive.lock();
      if (guard && *guard) route_now(m, origin, publisher);
    });
  }
}

void Broker::route_now(const Message& m, RouteOrigin origin, const std::string& publisher) {
  ++stats_.routed;
  if (observer_) observer_(m, origin, publisher, loop_.now());
  for (const auto& d : route(subscriptions_, m)) {
    Session* target = find_client(d.client_id);
    if (target == nullptr) continue;
    Publish out;
    out.topic = m.topic;
    out.payload = m.payload;
    out.qos = d.qos;
    if (d.qos == 1) {
      auto id = target->next_packet_id++;
      if (target->next_packet_id == 0) target->next_packet_id = 1;
      out.packet_id = id;
      target->inflight[id] = m.topic;
    }
    ++stats_.deliveries;
    send(*target, out);
  }
}

void Broker::send(Session& s, const Packet& p) {
  if (s.closed || !s.transport.send) return;
  s.transport.send(encode_packet(p, options_.limits));
}

void Broker::close(Session& s) {
  if (s.closed) return;
  s.closed = true;
  if (s.connected) drop_subscriptions(s.client_id);
  s.connected = false;
  auto close_fn = std::move(s.transport.close);
  auto id = s.id;
  // Erase after the current call stack unwinds; on_bytes() may still hold a
  // reference to this session.
  std::weak_ptr<bool> alive = alive_;
  loop_.post([this, alive, id] {
    auto guard = alive.lock();
    if (guard && *guard) sessions_.erase(id);
  });
  if (close_fn) close_fn();
}

Broker::Session* Broker::find(ConnectionId id) {
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.get();
}

Broker::Session* Broker::find_client(std::string_view client_id) {
  for (auto& [id, s] : sessions_) {
    if (s->connected && !s->closed && s->client_id == client_id) return s.get();
  }
  return nullptr;
}

void Broker::drop_subscriptions(std::string_view client_id) {
  std::erase_if(subscriptions_, [&](const Subscription& x) { return x.client_id == client_id; });
}

}  // namespace faultwire::mqtt
