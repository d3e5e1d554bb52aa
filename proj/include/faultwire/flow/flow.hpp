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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "faultwire/core/time.hpp"
#include "faultwire/flow/flow_spec.hpp"
#include "faultwire/heal/nodes.hpp"
#include "faultwire/mqtt/message.hpp"

namespace faultwire::flow {

struct AlarmEvent {
  std::string flow;
  heal::AlarmLevel level = heal::AlarmLevel::kOff;
  Instant instant{0};

  bool operator==(const AlarmEvent&) const = default;
};

struct FlowCounters {
  std::uint64_t received = 0;
  std::uint64_t malformed = 0;
  std::uint64_t discarded = 0;    // range filter and debounce
  std::uint64_t compensated = 0;  // mean-of-history and replayed values
  std::uint64_t groups = 0;
  std::uint64_t partial_groups = 0;
  std::uint64_t no_majority = 0;
};

using TimerId = std::uint64_t;

/// An executable pipeline of healing nodes. Node timers are requested through
/// the ArmTimer callback and come back through on_timer(); stale timers are
/// no-ops. The alarm level starts at Off.
class Flow {
 public:
  using ArmTimer = std::function<void(Instant at, TimerId id)>;

  Flow(FlowSpec spec, ArmTimer arm);

  std::vector<AlarmEvent> deliver(const Message& m, Instant now);
  std::vector<AlarmEvent> on_timer(TimerId id, Instant now);

  const FlowSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  const FlowCounters& counters() const { return counters_; }
  std::size_t stage_count() const { return stages_.size(); }
  std::vector<std::string> stage_names() const;

 private:
  struct Parse {};
  struct RangeFilter {
    heal::Thresholds thresholds;
  };
  struct Debounce {
    heal::DebounceNode node;
  };
  struct Join {
    heal::JoinNode node;
  };
  struct Vote {
    std::size_t min_consensus;
    double margin;
  };
  struct Compensate {
    heal::CompensateNode node;
  };
  struct Threshold {
    heal::Thresholds thresholds;
  };
  struct Rbe {
    heal::ReportByException node;
  };
  using Stage = std::variant<Parse, RangeFilter, Debounce, Join, Vote, Compensate, Threshold, Rbe>;

  struct VoteResult {
    std::optional<double> value;
  };
  using Datum = std::variant<heal::Reading, std::vector<heal::Reading>, VoteResult, double,
                             heal::AlarmLevel>;

  void push(std::size_t stage, Datum d, Instant now, std::vector<AlarmEvent>& out);
  void arm(std::size_t stage, const std::optional<heal::TimerArm>& t);
  void push_compensate_output(std::size_t stage, const heal::CompensateNode::Output& o, Instant now,
                              std::vector<AlarmEvent>& out);

  FlowSpec spec_;
  ArmTimer arm_;
  std::vector<Stage> stages_;
  FlowCounters counters_;
};

/// Validates `spec` and builds the flow. Throws FlowError on unknown nodes,
/// bad parameters, stage type mismatches, or a pipeline that does not match
/// the declared variant.
Flow build_flow(const FlowSpec& spec, Flow::ArmTimer arm);

}  // namespace faultwire::flow
