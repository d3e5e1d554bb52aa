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

#include "faultwire/flow/flow_host.hpp"

#include <string>

#include "faultwire/core/log.hpp"

namespace faultwire::flow {

FlowHost::FlowHost(EventLoop& loop, const FlowSpec& spec, mqtt::Client& client)
    : loop_(loop),
      client_(client),
      alive_(std::make_shared<bool>(true)),
      flow_(spec, [this](Instant at, TimerId id) {
        std::weak_ptr<bool> guard = alive_;
        loop_.post_at(at, [this, guard, id] {
          if (guard.expired()) return;
          emit(flow_.on_timer(id, loop_.now()));
        });
      }) {
  std::weak_ptr<bool> guard = alive_;
  client_.set_message_handler([this, guard](const Message& m) {
    if (guard.expired()) return;
    emit(flow_.deliver(m, loop_.now()));
  });
}

FlowHost::~FlowHost() {
  alive_.reset();
  client_.set_message_handler(nullptr);
}

void FlowHost::start(std::uint8_t qos) {
  client_.connect();
  for (const auto& topic : flow_.spec().input_topics) client_.subscribe(topic, qos);
}

void FlowHost::emit(const std::vector<AlarmEvent>& events) {
  for (const auto& e : events) {
    events_.push_back(e);
    spdlog::debug("flow {} -> {} at {} ms", e.flow, heal::to_string(e.level), to_ms(e.instant));
    client_.publish(flow_.spec().alarm_topic, std::to_string(heal::level_index(e.level)));
  }
}

}  // namespace faultwire::flow
