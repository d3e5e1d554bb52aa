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

#include "faultwire/fault/rule.hpp"

#include "faultwire/mqtt/topic.hpp"

namespace faultwire::fault {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

const char* operator_name(const Operator& op) {
  return std::visit(Overloaded{[](const MapOp&) { return "map"; },
                               [](const RandomDelayOp&) { return "randomDelay"; },
                               [](const BufferOp&) { return "buffer"; },
                               [](const RandomDropOp&) { return "randomDrop"; },
                               [](const DuplicateOp&) { return "duplicate"; }},
                    op);
}

FaultClass fault_class(const Operator& op) {
  return std::visit(Overloaded{[](const MapOp&) { return FaultClass::kCorruption; },
                               [](const RandomDelayOp&) { return FaultClass::kDelay; },
                               [](const BufferOp&) { return FaultClass::kReordering; },
                               [](const RandomDropOp&) { return FaultClass::kOmission; },
                               [](const DuplicateOp&) { return FaultClass::kDuplication; }},
                    op);
}

bool rule_active(const FaultRule& rule) {
  if (rule.counter <= rule.start_after) return false;
  return !rule.stop_after || rule.counter <= *rule.stop_after;
}

void validate_rule(const FaultRule& rule) {
  if (rule.topic.empty()) throw ConfigError("rule topic is empty");
  if (mqtt::has_wildcards(rule.topic)) {
    throw ConfigError("rule '" + rule.topic + "': wildcard topics unsupported in rules");
  }
  if (!mqtt::is_valid_topic_name(rule.topic)) throw ConfigError("rule topic is not a valid topic");
  if (rule.operators.empty()) throw ConfigError("rule '" + rule.topic + "' has no operators");
  if (rule.stop_after && rule.start_after >= *rule.stop_after) {
    throw ConfigError("rule '" + rule.topic + "': startAfter must be less than stopAfter");
  }
  auto fraction = [&](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("rule '" + rule.topic + "': " + what + " must be in [0, 1]");
    }
  };
  for (const auto& op : rule.operators) {
    std::visit(Overloaded{
                   [&](const MapOp& m) { fraction(m.probability, "map probability"); },
                   [&](const RandomDelayOp& d) {
                     if (d.min.count() < 0 || d.min > d.max) {
                       throw ConfigError("rule '" + rule.topic +
                                         "': randomDelay needs 0 <= minMs <= maxMs");
                     }
                   },
                   [&](const BufferOp& b) {
                     if (!b.count && !b.timeout) {
                       throw ConfigError("rule '" + rule.topic +
                                         "': buffer needs a count or a timeoutMs");
                     }
                     if (b.count && *b.count == 0) {
                       throw ConfigError("rule '" + rule.topic + "': buffer count must be >= 1");
                     }
                     if (b.timeout && b.timeout->count() < 0) {
                       throw ConfigError("rule '" + rule.topic + "': buffer timeoutMs is negative");
                     }
                   },
                   [&](const RandomDropOp& d) { fraction(d.probability, "randomDrop probability"); },
                   [&](const DuplicateOp& d) {
                     if (d.delay.count() < 0) {
                       throw ConfigError("rule '" + rule.topic + "': duplicate delayMs is negative");
                     }
                   }},
               op);
  }
}

}  // namespace faultwire::fault
