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

#include "faultwire/heal/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

namespace faultwire::heal {

const char* to_string(AlarmLevel l) {
  switch (l) {
    case AlarmLevel::kOff:
      return "off";
    case AlarmLevel::kWarn:
      return "warn";
    case AlarmLevel::kDanger:
      return "danger";
  }
  return "?";
}

std::optional<AlarmLevel> level_from_int(int v) {
  if (v < 0 || v > 2) return std::nullopt;
  return static_cast<AlarmLevel>(v);
}

void Thresholds::validate() const {
  if (!(valid_min < warn && warn < danger && danger <= valid_max)) {
    throw std::invalid_argument("thresholds must satisfy validMin < warn < danger <= validMax");
  }
}

std::optional<Reading> range_filter(const Reading& r, const Thresholds& t) {
  if (r.value >= t.valid_min && r.value <= t.valid_max) return r;
  return std::nullopt;
}

AlarmLevel threshold_alarm(double value, const Thresholds& t) {
  if (value >= t.danger) return AlarmLevel::kDanger;
  if (value >= t.warn) return AlarmLevel::kWarn;
  return AlarmLevel::kOff;
}

std::optional<double> majority_vote(std::span<const double> values, std::size_t min_consensus,
                                    double margin) {
  const std::size_t n = values.size();
  if (n == 0) return std::nullopt;

  // Union-find over the agreement graph.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double a = values[i];
      double b = values[j];
      if (std::abs(a - b) <= margin * std::max(std::abs(a), std::abs(b))) {
        auto ri = root(i);
        auto rj = root(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }

  // Roots are the lowest index of their component, so scanning in index order
  // and keeping strictly larger components implements the tie-break.
  std::vector<std::size_t> size(n, 0);
  std::vector<double> sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = root(i);
    ++size[r];
    sum[r] += values[i];
  }
  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (root(i) != i) continue;
    if (best == n || size[i] > size[best]) best = i;
  }
  if (size[best] < min_consensus) return std::nullopt;
  return sum[best] / static_cast<double>(size[best]);
}

JoinNode::JoinNode(std::size_t count, Duration timeout) : count_(count), timeout_(timeout) {}

JoinNode::Output JoinNode::step(const Reading& r) {
  Output out;
  auto it = std::find_if(group_.begin(), group_.end(),
                         [&](const Reading& g) { return g.sensor_id == r.sensor_id; });
  if (it != group_.end()) {
    *it = r;
  } else {
    if (group_.empty()) out.timer = TimerArm{r.instant + timeout_, epoch_};
    group_.push_back(r);
  }
  if (group_.size() >= count_) {
    out.group = std::move(group_);
    group_.clear();
    ++epoch_;
  }
  return out;
}

std::optional<std::vector<Reading>> JoinNode::on_timer(std::uint64_t token) {
  if (token != epoch_ || group_.empty()) return std::nullopt;
  auto partial = std::move(group_);
  group_.clear();
  ++epoch_;
  return partial;
}

CompensateNode::CompensateNode(Options options) : options_(options) {}

std::optional<TimerArm> CompensateNode::rearm(Instant now) {
  ++epoch_;
  if (!options_.replay_on_timeout) return std::nullopt;
  return TimerArm{now + options_.timeout, epoch_};
}

CompensateNode::Output CompensateNode::on_value(double v, Instant now) {
  history_.push_back(v);
  while (history_.size() > options_.history_length) history_.pop_front();
  last_ = v;
  replays_ = 0;
  Output out;
  out.value = v;
  out.timer = rearm(now);
  return out;
}

CompensateNode::Output CompensateNode::on_no_majority(Instant now) {
  Output out;
  out.timer = rearm(now);
  if (!options_.mean_on_no_majority) return out;
  if (history_.empty()) {
    spdlog::warn("compensate: no majority and no history to average");
    return out;
  }
  out.value = std::accumulate(history_.begin(), history_.end(), 0.0) /
              static_cast<double>(history_.size());
  out.compensated = true;
  return out;
}

CompensateNode::Output CompensateNode::on_timer(std::uint64_t token, Instant now) {
  Output out;
  if (token != epoch_ || !last_ || replays_ >= options_.max_replays) return out;
  ++replays_;
  out.value = *last_;
  out.compensated = true;
  out.timer = rearm(now);
  return out;
}

std::optional<Reading> DebounceNode::step(const Reading& r) {
  auto it = last_accepted_.find(r.sensor_id);
  if (it != last_accepted_.end() && r.instant - it->second < window_) return std::nullopt;
  last_accepted_[r.sensor_id] = r.instant;
  return r;
}

std::optional<AlarmLevel> ReportByException::step(AlarmLevel level) {
  if (last_ && *last_ == level) return std::nullopt;
  last_ = level;
  return level;
}

}  // namespace faultwire::heal
