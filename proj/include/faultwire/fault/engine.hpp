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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "faultwire/core/event_loop.hpp"
#include "faultwire/fault/config.hpp"
#include "faultwire/fault/pipeline.hpp"
#include "faultwire/mqtt/broker.hpp"

namespace faultwire::fault {

struct EngineStats {
  std::uint64_t intercepted = 0;
  std::uint64_t matched = 0;
  std::uint64_t faulted = 0;  // matched while the rule window was active
  std::uint64_t emitted = 0;
};

/// Applies compiled fault rules on the broker's publish path. The first (and
/// only) rule whose topic equals the message topic is used; its counter
/// advances on every matching publish, inside the window or not.
class FaultEngine final : public mqtt::Interceptor {
 public:
  /// `seed_override` replaces the document's seed when set.
  FaultEngine(EventLoop& loop, FaultConfig config, std::optional<std::uint64_t> seed_override = {});
  ~FaultEngine() override;

  std::vector<Emission> intercept(const Message& m, Instant now) override;
  void set_async_sink(AsyncSink sink) override { sink_ = std::move(sink); }

  std::uint64_t seed() const { return seed_; }
  const std::vector<Pipeline>& pipelines() const { return pipelines_; }
  const EngineStats& stats() const { return stats_; }

 private:
  void arm(std::size_t pipeline, const std::vector<TimerRequest>& timers);

  EventLoop& loop_;
  std::uint64_t seed_;
  std::vector<Pipeline> pipelines_;
  std::map<std::string, std::size_t, std::less<>> by_topic_;
  AsyncSink sink_;
  EngineStats stats_;
  std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

}  // namespace faultwire::fault
