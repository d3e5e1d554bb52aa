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

#include "faultwire/core/realtime_loop.hpp"

#include <utility>

namespace faultwire {

RealtimeLoop::RealtimeLoop(double time_scale)
    : time_scale_(time_scale > 0 ? time_scale : 1.0), origin_(Clock::now()) {}

RealtimeLoop::~RealtimeLoop() { stop(); }

Instant RealtimeLoop::now() const {
  auto wall = std::chrono::duration<double, std::milli>(Clock::now() - origin_).count();
  return Instant{static_cast<std::int64_t>(wall * time_scale_)};
}

RealtimeLoop::Clock::time_point RealtimeLoop::wall_for(Instant at) const {
  auto wall_ms = static_cast<double>(at.count()) / time_scale_;
  return origin_ + std::chrono::duration_cast<Clock::duration>(
                       std::chrono::duration<double, std::milli>(wall_ms));
}

void RealtimeLoop::post_at(Instant at, Task task) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    queue_.push(Event{at, next_seq_++, std::move(task)});
  }
  cv_.notify_one();
}

void RealtimeLoop::start() {
  std::lock_guard<std::mutex> lock(mu_);
  if (thread_.joinable()) return;
  stopping_ = false;
  thread_ = std::thread([this] { run(); });
}

void RealtimeLoop::stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable() && !on_loop_thread()) thread_.join();
}

void RealtimeLoop::wait_until(Instant at) const {
  std::this_thread::sleep_until(wall_for(at));
}

void RealtimeLoop::run() {
  std::unique_lock<std::mutex> lock(mu_);
  while (!stopping_) {
    if (queue_.empty()) {
      cv_.wait(lock);
      continue;
    }
    auto due = wall_for(queue_.top().at);
    if (Clock::now() < due) {
      cv_.wait_until(lock, due);
      continue;
    }
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    lock.unlock();
    ev.task();
    lock.lock();
  }
}

}  // namespace faultwire
