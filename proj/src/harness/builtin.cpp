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

#include "faultwire/harness/builtin.hpp"

namespace faultwire::harness {

using nlohmann::json;

namespace {

constexpr const char* kFaultTopic = "sensors/3/nox";

json rule(json operators) {
  return json{{"seed", 0},
              {"rules",
               {{{"topic", kFaultTopic},
                 {"startAfter", 10},
                 {"stopAfter", 110},
                 {"operators", std::move(operators)}}}}};
}

ExperimentSpec make(const std::string& name, flow::FlowVariant sh, json faults) {
  ExperimentSpec spec;
  spec.name = name;
  spec.plan.jitter_pct = kBuiltinJitterPct;
  spec.seed = 42;
  spec.flows.push_back(flow::make_flow_spec("BL", flow::FlowVariant::kBL));
  spec.flows.push_back(flow::make_flow_spec("SH", sh));
  spec.comparisons = {{"BL", "SH"}};
  if (!faults.is_null()) {
    auto faulted = flow::default_input_topics(spec.mirror_prefix);
    spec.flows.push_back(flow::make_flow_spec("FI", flow::FlowVariant::kBL, faulted));
    spec.flows.push_back(flow::make_flow_spec("FIxSH", sh, faulted));
    spec.comparisons.emplace_back("FI", "BL");
    spec.comparisons.emplace_back("FIxSH", "SH");
    spec.comparisons.emplace_back("FI", "FIxSH");
    spec.faults = std::move(faults);
  }
  return spec;
}

}  // namespace

std::filesystem::path default_dataset_path() { return FAULTWIRE_DEFAULT_DATASET; }

json builtin_faults(const std::string& name) {
  if (name == "S1E2") return rule({{{"type", "map"}, {"expr", "1000"}}});
  if (name == "S1E3") {
    return rule({{{"type", "map"}, {"expr", "value * random(0.2, 2.2)"}, {"probability", 0.4}}});
  }
  if (name == "S1E4") return rule({{{"type", "randomDrop"}, {"probability", 0.2}}});
  if (name == "S2E2") return rule({{{"type", "duplicate"}, {"delayMs", 6000}}});
  return nullptr;
}

std::vector<ExperimentSpec> builtin_experiments() {
  using flow::FlowVariant;
  std::vector<ExperimentSpec> out;
  for (const char* name : {"S1E1", "S1E2", "S1E3", "S1E4"}) {
    out.push_back(make(name, FlowVariant::kShS1, builtin_faults(name)));
  }
  for (const char* name : {"S2E1", "S2E2"}) {
    out.push_back(make(name, FlowVariant::kShS2, builtin_faults(name)));
  }
  return out;
}

std::optional<ExperimentSpec> find_builtin(const std::string& name) {
  for (auto& spec : builtin_experiments()) {
    if (spec.name == name) return spec;
  }
  return std::nullopt;
}

}  // namespace faultwire::harness
