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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "faultwire/core/time.hpp"
#include "faultwire/flow/flow.hpp"
#include "faultwire/heal/types.hpp"

namespace faultwire::harness {

struct Breakpoint {
  Instant at{0};
  heal::AlarmLevel level = heal::AlarmLevel::kOff;

  bool operator==(const Breakpoint&) const = default;
};

/// Piecewise-constant alarm level over [0, horizon). Starts Off at t=0.
/// Breakpoints are strictly increasing and consecutive levels differ.
class AlarmSignal {
 public:
  explicit AlarmSignal(Duration horizon);

  /// Changes the level from `at` onwards. `at` must not precede the last
  /// breakpoint; a change at the same instant replaces it. Changes at or
  /// after the horizon are ignored.
  void set(Instant at, heal::AlarmLevel level);

  heal::AlarmLevel level_at(Instant t) const;
  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  Duration horizon() const { return horizon_; }

  /// A change at t=0 counts as a transition out of the initial Off state.
  bool starts_changed() const { return changed_at_zero_; }

  bool operator==(const AlarmSignal&) const = default;

 private:
  Duration horizon_;
  std::vector<Breakpoint> points_;
  bool changed_at_zero_ = false;
};

AlarmSignal signal_from_events(const std::vector<flow::AlarmEvent>& events, Duration horizon);

/// Share of the horizon, in percent, where both signals hold the same level.
/// Throws std::invalid_argument when the horizons differ.
double overlap(const AlarmSignal& a, const AlarmSignal& b);

struct TransitionCounts {
  std::array<std::uint64_t, 3> by_level{};  // indexed by level_index
  std::uint64_t total = 0;

  std::uint64_t operator[](heal::AlarmLevel l) const { return by_level[heal::level_index(l)]; }
  bool operator==(const TransitionCounts&) const = default;
};

/// Counts level changes by destination level.
TransitionCounts transitions(const AlarmSignal& s);

}  // namespace faultwire::harness
