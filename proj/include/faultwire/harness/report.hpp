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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "faultwire/harness/experiment.hpp"

namespace faultwire::harness {

nlohmann::ordered_json to_json(const MetricsReport& report);
std::string metrics_csv(const MetricsReport& report);
std::string timeline_svg(const ExperimentResult& result);

/// Writes metrics.json, metrics.csv, messages.jsonl and timeline.svg into
/// `dir`, creating it if needed. Throws std::runtime_error on I/O failure.
void emit_report(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace faultwire::harness
