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
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "faultwire/core/time.hpp"
#include "faultwire/fault/expr.hpp"

namespace faultwire::fault {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rewrites the numeric payload. With probability < 1 a gate draw precedes
/// the expression's own draws.
struct MapOp {
  MapExpr expr;
  double probability = 1.0;
};

/// Adds a uniform integer delay in [min, max].
struct RandomDelayOp {
  Duration min{0};
  Duration max{0};
};

/// Holds messages until `count` are held or `timeout` has passed since the
/// first held message, then releases them all at once.
struct BufferOp {
  std::optional<std::size_t> count;
  std::optional<Duration> timeout;
};

struct RandomDropOp {
  double probability = 0.0;
};

/// Emits the message and a copy `delay` later.
struct DuplicateOp {
  Duration delay{0};
};

using Operator = std::variant<MapOp, RandomDelayOp, BufferOp, RandomDropOp, DuplicateOp>;

const char* operator_name(const Operator& op);

/// Message-level fault class an operator produces.
enum class FaultClass { kCorruption, kDelay, kReordering, kOmission, kDuplication };

FaultClass fault_class(const Operator& op);

struct FaultRule {
  std::string topic;
  std::vector<Operator> operators;
  std::uint64_t start_after = 0;
  std::optional<std::uint64_t> stop_after;  // nullopt = unbounded
  std::uint64_t counter = 0;
};

/// True iff start_after < counter <= stop_after. Call after incrementing the
/// counter for the current message.
bool rule_active(const FaultRule& rule);

/// Throws ConfigError if the rule breaks its invariants.
void validate_rule(const FaultRule& rule);

}  // namespace faultwire::fault
