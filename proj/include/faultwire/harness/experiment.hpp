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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "faultwire/fault/engine.hpp"
#include "faultwire/flow/flow.hpp"
#include "faultwire/flow/flow_spec.hpp"
#include "faultwire/harness/message_log.hpp"
#include "faultwire/harness/signal.hpp"
#include "faultwire/replay/dataset.hpp"
#include "faultwire/replay/schedule.hpp"

namespace faultwire::harness {

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ClockMode { kVirtual, kRealtime };

struct ExperimentSpec {
  std::string name;
  std::filesystem::path dataset;  // empty: the bundled dataset
  replay::DatasetOptions dataset_options;
  replay::ReplayPlan plan;
  std::optional<nlohmann::json> faults;  // fault-engine document
  std::vector<flow::FlowSpec> flows;
  /// Flow-name pairs whose overlap is reported.
  std::vector<std::pair<std::string, std::string>> comparisons;
  std::uint64_t seed = 0;
  ClockMode clock = ClockMode::kVirtual;
  double time_scale = 1.0;  // realtime only: virtual ms per wall ms
  std::uint16_t port = 0;   // realtime only: 0 picks a free port
  std::string mirror_prefix = "faulted/";
};

/// Throws ExperimentError unless BL and SH are present and FI / FIxSH are
/// present exactly when faults are configured.
void validate_spec(const ExperimentSpec& spec);

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentSpec& spec);

struct PairOverlap {
  std::string a;
  std::string b;
  double pct = 0;
};

struct FlowMetrics {
  std::string flow;
  TransitionCounts transitions;
  std::uint64_t events = 0;
  flow::FlowCounters counters;
};

struct FaultMetrics {
  std::uint64_t matched = 0;
  std::uint64_t faulted = 0;
  std::uint64_t emitted = 0;
};

struct MetricsReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::int64_t horizon_ms = 0;
  std::uint64_t published = 0;
  std::uint64_t logged = 0;
  std::vector<PairOverlap> overlaps;
  std::vector<FlowMetrics> flows;
  std::optional<FaultMetrics> faults;

  const FlowMetrics& flow(const std::string& name) const;
  double overlap(const std::string& a, const std::string& b) const;
};

struct ExperimentResult {
  MessageLog log;
  MetricsReport report;
  std::map<std::string, AlarmSignal> signals;
  std::map<std::string, std::vector<flow::AlarmEvent>> events;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Computes the report's overlap and transition fields from alarm signals.
MetricsReport compute_metrics(const ExperimentSpec& spec,
                              const std::map<std::string, AlarmSignal>& signals);

}  // namespace faultwire::harness
