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

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faultwire/heal/types.hpp"

namespace faultwire::heal {

// Self-healing stream operators. Every node is a deterministic state machine
// with step/timer entry points and no internal threading.

/// Passes readings inside [valid_min, valid_max], bounds inclusive.
std::optional<Reading> range_filter(const Reading& r, const Thresholds& t);

/// Danger at or above `danger`, Warn at or above `warn`, Off below.
AlarmLevel threshold_alarm(double value, const Thresholds& t);

/// Clusters `values` into connected components of the agreement graph, where
/// a and b agree iff |a - b| <= margin * max(|a|, |b|). Returns the mean of the
/// largest component when it has at least `min_consensus` members; ties go to
/// the component holding the lowest index. nullopt means no majority.
std::optional<double> majority_vote(std::span<const double> values, std::size_t min_consensus = 2,
                                    double margin = 0.25);

/// Groups one reading per distinct sensor. A group is released when `count`
/// sensors are present or `timeout` after its first reading, whichever comes
/// first. A repeat reading from a sensor already in the group replaces it in
/// place.
class JoinNode {
 public:
  struct Output {
    std::optional<std::vector<Reading>> group;
    std::optional<TimerArm> timer;
  };

  explicit JoinNode(std::size_t count = 3, Duration timeout = Duration{6000});

  Output step(const Reading& r);
  std::optional<std::vector<Reading>> on_timer(std::uint64_t token);

  std::size_t pending() const { return group_.size(); }

 private:
  std::size_t count_;
  Duration timeout_;
  std::vector<Reading> group_;
  std::uint64_t epoch_ = 0;
};

/// Replaces missing or rejected values.
///
/// A vote with no majority is answered with the mean of the last
/// `history_length` accepted values. Upstream silence longer than `timeout`
/// re-emits the last accepted value, at most `max_replays` times in a row.
class CompensateNode {
 public:
  struct Options {
    bool mean_on_no_majority = true;
    bool replay_on_timeout = true;
    Duration timeout{6000};
    std::size_t history_length = 3;
    std::size_t max_replays = 3;
  };

  struct Output {
    std::optional<double> value;
    bool compensated = false;
    std::optional<TimerArm> timer;
  };

  CompensateNode() : CompensateNode(Options{}) {}
  explicit CompensateNode(Options options);

  Output on_value(double v, Instant now);
  Output on_no_majority(Instant now);
  Output on_timer(std::uint64_t token, Instant now);

  const std::deque<double>& history() const { return history_; }

 private:
  std::optional<TimerArm> rearm(Instant now);

  Options options_;
  std::deque<double> history_;
  std::optional<double> last_;
  std::size_t replays_ = 0;
  std::uint64_t epoch_ = 0;
};

/// Drops readings that arrive sooner than `window` after the last accepted
/// reading of the same sensor.
class DebounceNode {
 public:
  explicit DebounceNode(Duration window = Duration{4000}) : window_(window) {}

  std::optional<Reading> step(const Reading& r);

 private:
  Duration window_;
  std::map<std::string, Instant, std::less<>> last_accepted_;
};

/// Emits a level only when it differs from the last emitted one.
class ReportByException {
 public:
  /// With `initial` set, that level counts as already emitted.
  explicit ReportByException(std::optional<AlarmLevel> initial = std::nullopt) : last_(initial) {}

  std::optional<AlarmLevel> step(AlarmLevel level);

 private:
  std::optional<AlarmLevel> last_;
};

}  // namespace faultwire::heal
