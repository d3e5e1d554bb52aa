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

#include "faultwire/core/virtual_scheduler.hpp"

#include <utility>

namespace faultwire {

void VirtualScheduler::post_at(Instant at, Task task) {
  if (at < now_) at = now_;
  queue_.push(Event{at, next_seq_++, std::move(task)});
}

bool VirtualScheduler::step() {
  if (queue_.empty()) return false;
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  now_ = ev.at;
  ev.task();
  return true;
}

std::size_t VirtualScheduler::run() {
  std::size_t n = 0;
  while (step()) ++n;
  return n;
}

std::size_t VirtualScheduler::run_until(Instant until) {
  std::size_t n = 0;
  while (!queue_.empty() && queue_.top().at <= until) {
    step();
    ++n;
  }
  if (now_ < until) now_ = until;
  return n;
}

}  // namespace faultwire
