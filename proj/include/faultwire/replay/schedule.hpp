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
#include <string>
#include <vector>

#include <json.hpp>

#include "faultwire/core/time.hpp"
#include "faultwire/replay/dataset.hpp"

namespace faultwire::replay {

struct ReplayPlan {
  std::size_t message_count = 120;
  std::int64_t period_ms = 5000;
  std::vector<std::string> sensors{"1", "2", "3"};
  std::vector<std::int64_t> offsets_ms{0, 100, 200};
  double jitter_pct = 0;
  std::uint64_t jitter_seed = 0;
  std::size_t start_row = 0;
  std::string topic_template = "sensors/{id}/nox";

  /// Throws DatasetError when the plan is inconsistent on its own.
  void validate() const;
  std::string topic_for(const std::string& sensor_id) const;
  Instant horizon() const { return Instant{static_cast<std::int64_t>(message_count) * period_ms}; }
};

struct Emission {
  Instant at{0};
  std::string sensor_id;
  std::string topic;
  double value = 0;

  bool operator==(const Emission&) const = default;
};

/// Pure function of its inputs. Output is sorted by instant, then sensor order.
std::vector<Emission> schedule(const DatasetSeries& series, const ReplayPlan& plan);

ReplayPlan plan_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ReplayPlan& plan);

}  // namespace faultwire::replay
