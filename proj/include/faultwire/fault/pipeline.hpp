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
#include <vector>

#include "faultwire/core/time.hpp"
#include "faultwire/fault/rng.hpp"
#include "faultwire/fault/rule.hpp"
#include "faultwire/mqtt/message.hpp"

namespace faultwire::fault {

/// Request to call Pipeline::on_timeout(op_index, token) at `at`.
struct TimerRequest {
  Instant at{0};
  std::size_t op_index = 0;
  std::uint64_t token = 0;
};

struct PipelineOutput {
  std::vector<Emission> emissions;
  std::vector<TimerRequest> timers;
};

struct PipelineStats {
  std::uint64_t mapped = 0;
  std::uint64_t map_skipped = 0;  // non-numeric payload or expression error
  std::uint64_t dropped = 0;
  std::uint64_t delayed = 0;
  std::uint64_t duplicated = 0;
  std::uint64_t buffered = 0;
  std::uint64_t flushed = 0;
};

/// The operator chain of one rule together with its random stream and buffer
/// state. Each operator maps the list of pending emissions to a new list;
/// draws are taken in operator order, then message order.
class Pipeline {
 public:
  Pipeline(FaultRule rule, std::uint64_t stream_seed);

  /// Runs `m` through every operator. The caller has already checked that the
  /// rule is active.
  PipelineOutput apply(const Message& m, Instant now);

  /// Buffer timeout for the operator at `op_index`. Stale tokens are ignored.
  PipelineOutput on_timeout(std::size_t op_index, std::uint64_t token, Instant now);

  FaultRule& rule() { return rule_; }
  const FaultRule& rule() const { return rule_; }
  SeededRng& rng() { return rng_; }
  const PipelineStats& stats() const { return stats_; }
  /// Messages currently held by buffer operators.
  std::size_t held() const;

 private:
  struct BufferState {
    std::vector<Emission> held;
    std::uint64_t epoch = 0;
  };

  PipelineOutput run_from(std::size_t first_op, std::vector<Emission> pending, Instant now);
  void apply_map(const MapOp& op, std::vector<Emission>& pending);

  FaultRule rule_;
  SeededRng rng_;
  std::vector<BufferState> buffers_;
  PipelineStats stats_;
};

/// Replaces the number in a sensor payload, keeping a {"value": x} envelope.
std::string rewrite_payload(const std::string& payload, double value);

}  // namespace faultwire::fault
