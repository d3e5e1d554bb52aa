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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

#include "faultwire/core/event_loop.hpp"

namespace faultwire {

/// Wall-clock event loop running on its own thread. `time_scale` is the number
/// of virtual milliseconds that elapse per wall-clock millisecond, so a scale
/// of 100 replays a 600 s experiment in 6 s. post_at() may be called from any
/// thread; tasks always execute on the loop thread.
class RealtimeLoop final : public EventLoop {
 public:
  explicit RealtimeLoop(double time_scale = 1.0);
  ~RealtimeLoop() override;

  RealtimeLoop(const RealtimeLoop&) = delete;
  RealtimeLoop& operator=(const RealtimeLoop&) = delete;

  Instant now() const override;
  void post_at(Instant at, Task task) override;

  void start();
  /// Stops the loop thread; pending tasks are discarded.
  void stop();

  /// Blocks the calling thread until virtual time reaches `at`.
  void wait_until(Instant at) const;

  bool on_loop_thread() const { return std::this_thread::get_id() == thread_.get_id(); }

 private:
  using Clock = std::chrono::steady_clock;
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

  void run();
  Clock::time_point wall_for(Instant at) const;

  const double time_scale_;
  const Clock::time_point origin_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  bool stopping_ = false;
  std::thread thread_;
};

}  // namespace faultwire
