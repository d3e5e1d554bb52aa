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

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "faultwire/fault/rule.hpp"

namespace faultwire::fault {

/// A compiled fault-injection document:
///
///   {"seed": 42,
///    "rules": [{"topic": "sensors/3/nox", "startAfter": 10, "stopAfter": 110,
///               "operators": [{"type": "map", "expr": "1000"}]}]}
///
/// Operator parameters: map {expr, probability}; randomDelay {minMs, maxMs};
/// buffer {count, timeoutMs}; randomDrop {probability}; duplicate {delayMs}.
struct FaultConfig {
  std::uint64_t seed = 0;
  std::vector<FaultRule> rules;
};

/// Compiles the whole document or throws ConfigError; never returns a
/// partially loaded rule set.
FaultConfig compile_config(const nlohmann::json& doc);
FaultConfig parse_config(std::string_view text);
FaultConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const FaultConfig& config);

}  // namespace faultwire::fault
