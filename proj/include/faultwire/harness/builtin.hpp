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

#include <optional>
#include <string>
#include <vector>

#include "faultwire/harness/experiment.hpp"

namespace faultwire::harness {

/// Per-sensor deviation applied by the builtin replay plans.
inline constexpr double kBuiltinJitterPct = 0.05;

std::filesystem::path default_dataset_path();

/// S1E1, S1E2, S1E3, S1E4, S2E1, S2E2.
std::vector<ExperimentSpec> builtin_experiments();
std::optional<ExperimentSpec> find_builtin(const std::string& name);

/// The fault document of a builtin experiment; null for the no-fault ones.
nlohmann::json builtin_faults(const std::string& name);

}  // namespace faultwire::harness
