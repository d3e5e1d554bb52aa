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

#include "faultwire/harness/signal.hpp"

#include <algorithm>

namespace faultwire::harness {

using heal::AlarmLevel;

AlarmSignal::AlarmSignal(Duration horizon) : horizon_(horizon) {
  if (horizon.count() <= 0) throw std::invalid_argument("signal horizon must be positive");
  points_.push_back({kEpoch, AlarmLevel::kOff});
}

void AlarmSignal::set(Instant at, AlarmLevel level) {
  if (at < kEpoch) throw std::invalid_argument("signal breakpoint before t=0");
  if (at >= Instant{horizon_}) return;
  if (at < points_.back().at) throw std::invalid_argument("signal breakpoints out of order");
  if (at == points_.back().at) {
    points_.back().level = level;
    if (points_.size() > 1 && points_[points_.size() - 2].level == level) points_.pop_back();
    if (at == kEpoch) changed_at_zero_ = level != AlarmLevel::kOff;
    return;
  }
  if (points_.back().level == level) return;
  points_.push_back({at, level});
}

AlarmLevel AlarmSignal::level_at(Instant t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Instant v, const Breakpoint& p) { return v < p.at; });
  return it == points_.begin() ? AlarmLevel::kOff : std::prev(it)->level;
}

AlarmSignal signal_from_events(const std::vector<flow::AlarmEvent>& events, Duration horizon) {
  AlarmSignal s(horizon);
  for (const auto& e : events) s.set(e.instant, e.level);
  return s;
}

double overlap(const AlarmSignal& a, const AlarmSignal& b) {
  if (a.horizon() != b.horizon()) throw std::invalid_argument("overlap: horizons differ");
  const auto& pa = a.breakpoints();
  const auto& pb = b.breakpoints();
  const Instant end{a.horizon()};
  std::size_t i = 0;
  std::size_t j = 0;
  Instant t = kEpoch;
  std::int64_t same = 0;
  while (t < end) {
    while (i + 1 < pa.size() && pa[i + 1].at <= t) ++i;
    while (j + 1 < pb.size() && pb[j + 1].at <= t) ++j;
    Instant next = end;
    if (i + 1 < pa.size()) next = std::min(next, pa[i + 1].at);
    if (j + 1 < pb.size()) next = std::min(next, pb[j + 1].at);
    if (pa[i].level == pb[j].level) same += (next - t).count();
    t = next;
  }
  return 100.0 * static_cast<double>(same) / static_cast<double>(a.horizon().count());
}

TransitionCounts transitions(const AlarmSignal& s) {
  TransitionCounts c;
  const auto& p = s.breakpoints();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == 0 && !s.starts_changed()) continue;
    ++c.by_level[heal::level_index(p[i].level)];
    ++c.total;
  }
  return c;
}

}  // namespace faultwire::harness
