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
#include <cstdint>

namespace faultwire {

// Virtual time is measured in milliseconds since the start of a run. The same
// representation is used for instants and durations.
using Duration = std::chrono::milliseconds;
using Instant = std::chrono::milliseconds;

constexpr Instant kEpoch{0};

inline std::int64_t to_ms(Duration d) { return d.count(); }

}  // namespace faultwire
