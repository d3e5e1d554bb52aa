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

#include "faultwire/fault/engine.hpp"

#include <utility>

namespace faultwire::fault {

FaultEngine::FaultEngine(EventLoop& loop, FaultConfig config,
                         std::optional<std::uint64_t> seed_override)
    : loop_(loop), seed_(seed_override.value_or(config.seed)) {
  pipelines_.reserve(config.rules.size());
  for (std::size_t i = 0; i < config.rules.size(); ++i) {
    validate_rule(config.rules[i]);
    if (!by_topic_.emplace(config.rules[i].topic, i).second) {
      throw ConfigError("more than one rule for topic '" + config.rules[i].topic + "'");
    }
    pipelines_.emplace_back(std::move(config.rules[i]), derive_stream_seed(seed_, i));
  }
}

FaultEngine::~FaultEngine() { *alive_ = false; }

std::vector<Emission> FaultEngine::intercept(const Message& m, Instant now) {
  ++stats_.intercepted;
  auto it = by_topic_.find(m.topic);
  if (it == by_topic_.end()) {
    ++stats_.emitted;
    return {Emission{m, now}};
  }
  ++stats_.matched;
  auto& pipeline = pipelines_[it->second];
  ++pipeline.rule().counter;
  if (!rule_active(pipeline.rule())) {
    ++stats_.emitted;
    return {Emission{m, now}};
  }
  ++stats_.faulted;
  auto out = pipeline.apply(m, now);
  arm(it->second, out.timers);
  stats_.emitted += out.emissions.size();
  return std::move(out.emissions);
}

void FaultEngine::arm(std::size_t index, const std::vector<TimerRequest>& timers) {
  std::weak_ptr<bool> alive = alive_;
  for (const auto& t : timers) {
    loop_.post_at(t.at, [this, alive, index, t] {
      auto guard = alive.lock();
      if (!guard || !*guard) return;
      auto out = pipelines_[index].on_timeout(t.op_index, t.token, loop_.now());
      arm(index, out.timers);
      stats_.emitted += out.emissions.size();
      if (!out.emissions.empty() && sink_) sink_(std::move(out.emissions));
    });
  }
}

}  // namespace faultwire::fault
