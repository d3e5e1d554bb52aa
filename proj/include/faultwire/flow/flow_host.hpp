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

#include <memory>
#include <vector>

#include "faultwire/core/event_loop.hpp"
#include "faultwire/flow/flow.hpp"
#include "faultwire/mqtt/client.hpp"

namespace faultwire::flow {

/// Runs a Flow behind an MQTT client: subscribes to the flow's inputs,
/// schedules node timers on the loop and publishes each alarm level ("0",
/// "1" or "2") on the flow's alarm topic.
class FlowHost {
 public:
  FlowHost(EventLoop& loop, const FlowSpec& spec, mqtt::Client& client);
  ~FlowHost();

  FlowHost(const FlowHost&) = delete;
  FlowHost& operator=(const FlowHost&) = delete;

  /// Sends CONNECT and the subscriptions.
  void start(std::uint8_t qos = 0);

  const Flow& flow() const { return flow_; }
  const std::vector<AlarmEvent>& events() const { return events_; }

 private:
  void emit(const std::vector<AlarmEvent>& events);

  EventLoop& loop_;
  mqtt::Client& client_;
  std::shared_ptr<bool> alive_;
  Flow flow_;
  std::vector<AlarmEvent> events_;
};

}  // namespace faultwire::flow
