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
#include <queue>
#include <vector>

#include "faultwire/core/event_loop.hpp"

namespace faultwire {

/// Deterministic discrete-event scheduler. Events are ordered by
/// (instant, posting sequence), so identical inputs replay identically.
class VirtualScheduler final : public EventLoop {
 public:
  Instant now() const override { return now_; }
  void post_at(Instant at, Task task) override;

  /// Processes events until the queue is empty. Returns the number of events run.
  std::size_t run();

  /// Processes events with instant <= `until`; the clock ends at `until`.
  std::size_t run_until(Instant until);

  bool idle() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }

 private:
  struct Event {
    Instant at;
    std::uint64_t seq;
    Task task;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  bool step();

  Instant now_{kEpoch};
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace faultwire
