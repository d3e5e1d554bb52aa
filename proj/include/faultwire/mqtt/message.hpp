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
#include <string>
#include <vector>

#include "faultwire/core/time.hpp"

namespace faultwire {

/// A routed application message.
struct Message {
  std::string topic;
  std::string payload;
  Instant publish_instant{0};
  std::uint8_t qos = 0;

  bool operator==(const Message&) const = default;
};

/// A message scheduled for routing at `due` (never earlier than the publish
/// that produced it).
struct Emission {
  Message message;
  Instant due{0};

  bool operator==(const Emission&) const = default;
};

namespace mqtt {

struct Subscription {
  std::string client_id;
  std::string filter;
  std::uint8_t qos = 0;

  bool operator==(const Subscription&) const = default;
};

struct Delivery {
  std::string client_id;
  std::uint8_t qos = 0;

  bool operator==(const Delivery&) const = default;
};

/// One delivery per matching client, ordered by that client's first matching
/// subscription. Effective qos is min(publish qos, highest matching
/// subscription qos).
std::vector<Delivery> route(const std::vector<Subscription>& subscriptions, const Message& m);

}  // namespace mqtt
}  // namespace faultwire
