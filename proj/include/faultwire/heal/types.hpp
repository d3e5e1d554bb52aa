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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "faultwire/core/time.hpp"

namespace faultwire::heal {

enum class AlarmLevel : std::uint8_t { kOff = 0, kWarn = 1, kDanger = 2 };

constexpr int level_index(AlarmLevel l) { return static_cast<int>(l); }
const char* to_string(AlarmLevel l);
std::optional<AlarmLevel> level_from_int(int v);

struct Reading {
  std::string sensor_id;
  double value = 0;  // ppb
  Instant instant{0};

  bool operator==(const Reading&) const = default;
};

struct Thresholds {
  double warn = 53;
  double danger = 212;
  double valid_min = 5;
  double valid_max = 1000;

  /// Throws std::invalid_argument unless valid_min < warn < danger <= valid_max.
  void validate() const;
};

/// Requests a call to the node's on_timer(token) at `at`.
struct TimerArm {
  Instant at{0};
  std::uint64_t token = 0;
};

}  // namespace faultwire::heal
