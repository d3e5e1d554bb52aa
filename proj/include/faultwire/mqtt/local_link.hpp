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
#include <string>

#include "faultwire/core/event_loop.hpp"
#include "faultwire/mqtt/broker.hpp"
#include "faultwire/mqtt/client.hpp"

namespace faultwire::mqtt {

/// In-process connection between an embedded Client and a Broker. Bytes cross
/// in both directions as zero-delay events on the shared loop, so delivery is
/// FIFO and deterministic under a VirtualScheduler while still exercising the
/// full wire codec.
class LocalLink {
 public:
  LocalLink(EventLoop& loop, Broker& broker, std::string client_id);
  ~LocalLink();

  LocalLink(const LocalLink&) = delete;
  LocalLink& operator=(const LocalLink&) = delete;

  Client& client() { return *client_; }
  ConnectionId connection_id() const { return connection_; }
  bool broker_closed() const { return state_->broker_closed; }

 private:
  struct State {
    bool alive = true;
    bool broker_closed = false;
  };

  EventLoop& loop_;
  Broker& broker_;
  std::shared_ptr<State> state_ = std::make_shared<State>();
  std::unique_ptr<Client> client_;
  ConnectionId connection_ = 0;
};

}  // namespace faultwire::mqtt
