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

#include "faultwire/mqtt/local_link.hpp"

#include <utility>

namespace faultwire::mqtt {

LocalLink::LocalLink(EventLoop& loop, Broker& broker, std::string client_id)
    : loop_(loop), broker_(broker) {
  std::weak_ptr<State> weak = state_;

  Broker::Transport transport;
  transport.send = [this, weak](std::vector<std::uint8_t> bytes) {
    loop_.post([this, weak, bytes = std::move(bytes)] {
      auto st = weak.lock();
      if (st && st->alive) client_->on_bytes(bytes);
    });
  };
  transport.close = [weak] {
    if (auto st = weak.lock()) st->broker_closed = true;
  };
  connection_ = broker_.open_connection(std::move(transport));

  auto id = connection_;
  client_ = std::make_unique<Client>(loop_, std::move(client_id),
                                     [this, weak, id](std::vector<std::uint8_t> bytes) {
                                       loop_.post([this, weak, id, bytes = std::move(bytes)] {
                                         auto st = weak.lock();
                                         if (st && st->alive && !st->broker_closed) {
                                           broker_.on_bytes(id, bytes);
                                         }
                                       });
                                     });
}

LocalLink::~LocalLink() {
  state_->alive = false;
  if (!state_->broker_closed) broker_.on_transport_closed(connection_);
}

}  // namespace faultwire::mqtt
