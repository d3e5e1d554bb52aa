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

#include "faultwire/replay/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace faultwire::replay {

using nlohmann::json;

void ReplayPlan::validate() const {
  if (message_count == 0) throw DatasetError("replay: messageCount must be positive");
  if (period_ms <= 0) throw DatasetError("replay: periodMs must be positive");
  if (sensors.empty()) throw DatasetError("replay: no sensors");
  if (offsets_ms.size() != sensors.size()) {
    throw DatasetError("replay: need one offset per sensor");
  }
  for (std::size_t i = 0; i < offsets_ms.size(); ++i) {
    if (offsets_ms[i] < 0 || offsets_ms[i] >= period_ms) {
      throw DatasetError("replay: offsets must lie in [0, periodMs)");
    }
    if (i > 0 && offsets_ms[i] <= offsets_ms[i - 1]) {
      throw DatasetError("replay: offsets must be strictly increasing");
    }
  }
  if (!(jitter_pct >= 0 && jitter_pct < 1)) throw DatasetError("replay: jitterPct must be in [0, 1)");
  if (topic_template.find("{id}") == std::string::npos) {
    throw DatasetError("replay: topic template needs an {id} placeholder");
  }
}

std::string ReplayPlan::topic_for(const std::string& sensor_id) const {
  std::string t = topic_template;
  t.replace(t.find("{id}"), 4, sensor_id);
  return t;
}

std::vector<Emission> schedule(const DatasetSeries& series, const ReplayPlan& plan) {
  plan.validate();
  if (plan.start_row + plan.message_count > series.values.size()) {
    throw DatasetError("replay: dataset has " + std::to_string(series.values.size()) +
                       " values, plan needs " + std::to_string(plan.start_row + plan.message_count));
  }
  std::vector<Emission> out;
  out.reserve(plan.message_count * plan.sensors.size());
  for (std::size_t k = 0; k < plan.message_count; ++k) {
    double base = series.values[plan.start_row + k];
    for (std::size_t i = 0; i < plan.sensors.size(); ++i) {
      double value = base;
      if (plan.jitter_pct > 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(plan.jitter_seed),
                          static_cast<std::uint32_t>(plan.jitter_seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k)};
        std::mt19937_64 gen(seq);
        double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        value = std::round(base * (1 + plan.jitter_pct * (2 * u - 1)) * 10) / 10;
      }
      auto at = static_cast<std::int64_t>(k) * plan.period_ms + plan.offsets_ms[i];
      out.push_back(Emission{Instant{at}, plan.sensors[i], plan.topic_for(plan.sensors[i]), value});
    }
  }
  return out;
}

ReplayPlan plan_from_json(const json& j) {
  if (!j.is_object()) throw DatasetError("replay plan must be an object");
  static const char* const kKeys[] = {"messageCount", "periodMs",   "sensors",  "perSensorOffsetMs",
                                      "jitterPct",    "jitterSeed", "startRow", "topicTemplate"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw DatasetError("replay plan: unknown field '" + key + "'");
    }
  }
  ReplayPlan p;
  try {
    p.message_count = j.value("messageCount", p.message_count);
    p.period_ms = j.value("periodMs", p.period_ms);
    p.sensors = j.value("sensors", p.sensors);
    p.offsets_ms = j.value("perSensorOffsetMs", p.offsets_ms);
    p.jitter_pct = j.value("jitterPct", p.jitter_pct);
    p.jitter_seed = j.value("jitterSeed", p.jitter_seed);
    p.start_row = j.value("startRow", p.start_row);
    p.topic_template = j.value("topicTemplate", p.topic_template);
  } catch (const json::exception& e) {
    throw DatasetError(std::string("replay plan: ") + e.what());
  }
  p.validate();
  return p;
}

json to_json(const ReplayPlan& p) {
  return json{{"messageCount", p.message_count}, {"periodMs", p.period_ms},
              {"sensors", p.sensors},            {"perSensorOffsetMs", p.offsets_ms},
              {"jitterPct", p.jitter_pct},       {"jitterSeed", p.jitter_seed},
              {"startRow", p.start_row},         {"topicTemplate", p.topic_template}};
}

}  // namespace faultwire::replay
