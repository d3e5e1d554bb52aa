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

#include <functional>

#include "faultwire/core/time.hpp"

namespace faultwire {

/// A serialized executor with a clock. Every stateful component in the broker,
/// fault engine and flow runtime is driven from exactly one EventLoop; callbacks
/// never run concurrently with each other.
class EventLoop {
 public:
  using Task = std::function<void()>;

  virtual ~EventLoop() = default;

  virtual Instant now() const = 0;

  /// Runs `task` at `at` (or now, if `at` is in the past). Tasks with the same
  /// instant run in posting order.
  virtual void post_at(Instant at, Task task) = 0;

  void post(Task task) { post_at(now(), std::move(task)); }
  void post_after(Duration delay, Task task) { post_at(now() + delay, std::move(task)); }
};

}  // namespace faultwire
