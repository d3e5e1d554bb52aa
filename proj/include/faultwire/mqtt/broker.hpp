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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faultwire/core/event_loop.hpp"
#include "faultwire/mqtt/codec.hpp"
#include "faultwire/mqtt/message.hpp"
#include "faultwire/mqtt/packet.hpp"

namespace faultwire::mqtt {

using ConnectionId = std::uint64_t;

/// Hook on the broker's publish path. Every client publish is handed to
/// intercept() before routing; the returned emissions are routed at their due
/// instants instead of the original.
class Interceptor {
 public:
  using AsyncSink = std::function<void(std::vector<Emission>)>;

  virtual ~Interceptor() = default;
  virtual std::vector<Emission> intercept(const Message& m, Instant now) = 0;
  /// Receives emissions produced outside intercept(), e.g. on a buffer timeout.
  virtual void set_async_sink(AsyncSink sink) = 0;
};

enum class RouteOrigin : std::uint8_t {
  kClient,    // routed as published
  kInjected,  // produced or altered by the interceptor
};

/// Observes every routed message, including ones without subscribers.
using RouteObserver = std::function<void(const Message& m, RouteOrigin origin,
                                         std::string_view publisher, Instant at)>;

/// When set, client publishes are routed untouched on their own topic and the
/// interceptor's output is routed on `prefix + topic`. Only topics matching
/// `filter` are mirrored.
struct MirrorOptions {
  std::string prefix = "faulted/";
  std::string filter = "#";
};

struct BrokerOptions {
  CodecLimits limits;
  std::optional<MirrorOptions> mirror;
  bool enforce_keep_alive = false;
};

struct BrokerStats {
  std::uint64_t connections = 0;
  std::uint64_t publishes_in = 0;
  std::uint64_t routed = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t protocol_errors = 0;
};

/// MQTT 3.1.1 broker core. Transport-agnostic: connections hand it raw bytes
/// and receive raw bytes through their Transport callbacks. All methods must be
/// called from the owning EventLoop.
class Broker {
 public:
  struct Transport {
    std::function<void(std::vector<std::uint8_t>)> send;
    std::function<void()> close;
  };

  explicit Broker(EventLoop& loop, BrokerOptions options = {});
  ~Broker();

  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  ConnectionId open_connection(Transport transport);
  void on_bytes(ConnectionId id, std::span<const std::uint8_t> bytes);
  /// The transport went away without a DISCONNECT.
  void on_transport_closed(ConnectionId id);

  void set_interceptor(Interceptor* interceptor);
  void set_observer(RouteObserver observer) { observer_ = std::move(observer); }

  /// Closes sessions silent for more than 1.5x their keep-alive. No-op unless
  /// enforce_keep_alive is set.
  void check_keep_alive();

  const std::vector<Subscription>& subscriptions() const { return subscriptions_; }
  const BrokerStats& stats() const { return stats_; }
  std::size_t session_count() const;

 private:
  struct Session {
    ConnectionId id = 0;
    Transport transport;
    StreamDecoder decoder;
    std::string client_id;
    bool connected = false;
    bool closed = false;
    std::uint16_t keep_alive_s = 0;
    Instant last_activity{0};
    std::uint16_t next_packet_id = 1;
    std::map<std::uint16_t, std::string> inflight;  // qos 1 deliveries awaiting PUBACK
  };

  void handle(Session& s, Packet packet);
  void handle_connect(Session& s, const Connect& c);
  void handle_subscribe(Session& s, const Subscribe& sub);
  void handle_unsubscribe(Session& s, const Unsubscribe& unsub);
  void handle_publish(Session& s, const Publish& pub);

  void dispatch(const std::vector<Emission>& emissions, const Message& original,
                const std::string& publisher, bool mirrored);
  void route_now(const Message& m, RouteOrigin origin, const std::string& publisher);
  void send(Session& s, const Packet& p);
  void close(Session& s);
  Session* find(ConnectionId id);
  Session* find_client(std::string_view client_id);
  void drop_subscriptions(std::string_view client_id);

  EventLoop& loop_;
  BrokerOptions options_;
  Interceptor* interceptor_ = nullptr;
  RouteObserver observer_;
  std::map<ConnectionId, std::unique_ptr<Session>> sessions_;
  std::vector<Subscription> subscriptions_;
  ConnectionId next_id_ = 1;
  std::uint64_t auto_client_ids_ = 0;
  BrokerStats stats_;
  std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

}  // namespace faultwire::mqtt
