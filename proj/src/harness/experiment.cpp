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

#include "faultwire/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <memory>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "faultwire/core/number_format.hpp"
#include "faultwire/core/realtime_loop.hpp"
#include "faultwire/core/virtual_scheduler.hpp"
#include "faultwire/fault/config.hpp"
#include "faultwire/flow/flow_host.hpp"
#include "faultwire/harness/builtin.hpp"
#include "faultwire/mqtt/broker.hpp"
#include "faultwire/mqtt/local_link.hpp"
#include "faultwire/mqtt/tcp.hpp"

namespace faultwire::harness {

using nlohmann::json;

namespace {

constexpr const char* kReplayClient = "replay";

bool has_flow(const ExperimentSpec& spec, const std::string& name) {
  return std::any_of(spec.flows.begin(), spec.flows.end(),
                     [&](const flow::FlowSpec& f) { return f.name == name; });
}

std::vector<std::pair<std::string, std::string>> comparisons(const ExperimentSpec& spec) {
  if (!spec.comparisons.empty()) return spec.comparisons;
  std::vector<std::pair<std::string, std::string>> pairs{{"BL", "SH"}};
  if (spec.faults) {
    pairs.emplace_back("FI", "BL");
    pairs.emplace_back("FIxSH", "SH");
  }
  return pairs;
}

std::string mirror_filter(const replay::ReplayPlan& plan) {
  std::string f = plan.topic_template;
  f.replace(f.find("{id}"), 4, "+");
  return f;
}

// Everything a run produces besides the metrics.
struct RunOutput {
  MessageLog log;
  std::map<std::string, std::vector<flow::AlarmEvent>> events;
  std::map<std::string, flow::FlowCounters> counters;
  std::optional<FaultMetrics> faults;
};

struct Prepared {
  std::vector<replay::Emission> emissions;
  std::optional<fault::FaultConfig> faults;
};

Prepared prepare(const ExperimentSpec& spec) {
  validate_spec(spec);
  Prepared p;
  auto path = spec.dataset.empty() ? default_dataset_path() : spec.dataset;
  auto series = replay::load_dataset(path, spec.dataset_options);
  auto plan = spec.plan;
  plan.jitter_seed = spec.seed;
  p.emissions = replay::schedule(series, plan);
  if (spec.faults) {
    try {
      p.faults = fault::compile_config(*spec.faults);
    } catch (const fault::ConfigError& e) {
      throw ExperimentError(std::string("fault config: ") + e.what());
    }
  }
  return p;
}

mqtt::RouteObserver make_observer(MessageLog& log, const std::set<std::string>& flow_clients,
                                  std::function<Instant(Instant)> rebase) {
  return [&log, flow_clients, rebase](const Message& m, mqtt::RouteOrigin origin,
                                      std::string_view publisher, Instant at) {
    LogOrigin o = origin == mqtt::RouteOrigin::kInjected ? LogOrigin::kInjected : LogOrigin::kClient;
    if (origin == mqtt::RouteOrigin::kClient && flow_clients.count(std::string(publisher)) != 0) {
      o = LogOrigin::kFlow;
    }
    log.push_back(LogEntry{rebase(at), m.topic, m.payload, o});
  };
}

std::string client_id_for(const flow::FlowSpec& f) { return "flow-" + f.name; }

RunOutput run_virtual(const ExperimentSpec& spec, const Prepared& prep) {
  RunOutput out;
  VirtualScheduler loop;

  std::unique_ptr<fault::FaultEngine> engine;
  if (prep.faults) engine = std::make_unique<fault::FaultEngine>(loop, *prep.faults, spec.seed);

  mqtt::BrokerOptions options;
  if (engine) options.mirror = mqtt::MirrorOptions{spec.mirror_prefix, mirror_filter(spec.plan)};
  mqtt::Broker broker(loop, options);
  if (engine) broker.set_interceptor(engine.get());

  std::set<std::string> flow_clients;
  for (const auto& f : spec.flows) flow_clients.insert(client_id_for(f));
  broker.set_observer(make_observer(out.log, flow_clients, [](Instant t) { return t; }));

  std::vector<std::unique_ptr<mqtt::LocalLink>> links;
  std::vector<std::unique_ptr<flow::FlowHost>> hosts;
  for (const auto& f : spec.flows) {
    links.push_back(std::make_unique<mqtt::LocalLink>(loop, broker, client_id_for(f)));
    hosts.push_back(std::make_unique<flow::FlowHost>(loop, f, links.back()->client()));
    hosts.back()->start();
  }
  mqtt::LocalLink sensor(loop, broker, kReplayClient);
  sensor.client().connect();
  for (const auto& e : prep.emissions) {
    loop.post_at(e.at, [&sensor, topic = e.topic, value = e.value] {
      sensor.client().publish(topic, format_number(value));
    });
  }
  loop.run();

  for (const auto& h : hosts) {
    out.events[h->flow().name()] = h->events();
    out.counters[h->flow().name()] = h->flow().counters();
  }
  if (engine) {
    const auto& s = engine->stats();
    out.faults = FaultMetrics{s.matched, s.faulted, s.emitted};
  }
  hosts.clear();
  return out;
}

RunOutput run_realtime(const ExperimentSpec& spec, const Prepared& prep) {
  if (!(spec.time_scale > 0)) throw ExperimentError("time scale must be positive");
  RunOutput out;
  RealtimeLoop loop(spec.time_scale);

  std::unique_ptr<fault::FaultEngine> engine;
  if (prep.faults) engine = std::make_unique<fault::FaultEngine>(loop, *prep.faults, spec.seed);
  mqtt::BrokerOptions options;
  options.enforce_keep_alive = true;
  if (engine) options.mirror = mqtt::MirrorOptions{spec.mirror_prefix, mirror_filter(spec.plan)};
  mqtt::Broker broker(loop, options);
  if (engine) broker.set_interceptor(engine.get());

  // Instants are reported relative to the first replay round.
  auto base = std::make_shared<std::atomic<std::int64_t>>(0);
  std::set<std::string> flow_clients;
  for (const auto& f : spec.flows) flow_clients.insert(client_id_for(f));
  broker.set_observer(make_observer(out.log, flow_clients, [base](Instant t) {
    return Instant{std::max<std::int64_t>(0, t.count() - base->load())};
  }));

  mqtt::TcpServer server(loop, broker, spec.port);
  loop.start();
  try {
    server.start();
  } catch (const mqtt::TransportError&) {
    loop.stop();
    throw;
  }

  std::vector<std::unique_ptr<mqtt::TcpClientConnection>> conns;
  std::vector<std::unique_ptr<flow::FlowHost>> hosts;
  std::size_t expected_subs = 0;
  for (const auto& f : spec.flows) {
    conns.push_back(std::make_unique<mqtt::TcpClientConnection>(loop, "127.0.0.1", server.port(),
                                                                client_id_for(f)));
    hosts.push_back(std::make_unique<flow::FlowHost>(loop, f, conns.back()->client()));
    expected_subs += f.input_topics.size();
  }
  mqtt::TcpClientConnection sensor(loop, "127.0.0.1", server.port(), kReplayClient);
  for (auto& h : hosts) loop.post([host = h.get()] { host->start(); });
  loop.post([&sensor] { sensor.client().connect(); });

  auto wall_deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (true) {
    std::promise<std::size_t> count;
    auto fut = count.get_future();
    loop.post([&] { count.set_value(broker.subscriptions().size()); });
    if (fut.get() >= expected_subs) break;
    if (std::chrono::steady_clock::now() > wall_deadline) {
      loop.stop();
      throw std::runtime_error("flows did not subscribe within 5 s");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  const auto start = loop.now() + Duration{10};
  base->store(start.count());
  for (const auto& e : prep.emissions) {
    loop.post_at(start + Duration{e.at}, [&sensor, topic = e.topic, value = e.value] {
      sensor.client().publish(topic, format_number(value));
    });
  }
  // Leave room for the last join and compensate timeouts to fire.
  loop.wait_until(start + Duration{spec.plan.horizon()} + Duration{30000});

  std::promise<void> collected;
  loop.post([&] {
    for (const auto& h : hosts) {
      auto events = h->events();
      for (auto& ev : events) ev.instant = Instant{std::max<std::int64_t>(0, (ev.instant - start).count())};
      out.events[h->flow().name()] = std::move(events);
      out.counters[h->flow().name()] = h->flow().counters();
    }
    if (engine) {
      const auto& s = engine->stats();
      out.faults = FaultMetrics{s.matched, s.faulted, s.emitted};
    }
    collected.set_value();
  });
  collected.get_future().get();
  loop.stop();
  hosts.clear();
  for (auto& c : conns) c->close();
  sensor.close();
  server.stop();
  return out;
}

}  // namespace

void validate_spec(const ExperimentSpec& spec) {
  if (spec.name.empty()) throw ExperimentError("experiment needs a name");
  std::set<std::string> names;
  for (const auto& f : spec.flows) {
    if (!names.insert(f.name).second) throw ExperimentError("duplicate flow name '" + f.name + "'");
  }
  if (!has_flow(spec, "BL") || !has_flow(spec, "SH")) {
    throw ExperimentError("experiment '" + spec.name + "' needs flows named BL and SH");
  }
  bool fi = has_flow(spec, "FI");
  bool fish = has_flow(spec, "FIxSH");
  if (spec.faults && (!fi || !fish)) {
    throw ExperimentError("experiment '" + spec.name + "' has faults but no FI / FIxSH flows");
  }
  if (!spec.faults && (fi || fish)) {
    throw ExperimentError("experiment '" + spec.name + "' has FI flows but no fault config");
  }
  for (const auto& [a, b] : spec.comparisons) {
    if (!names.count(a) || !names.count(b)) {
      throw ExperimentError("comparison " + a + "/" + b + " names an unknown flow");
    }
  }
  try {
    spec.plan.validate();
  } catch (const replay::DatasetError& e) {
    throw ExperimentError(e.what());
  }
}

const FlowMetrics& MetricsReport::flow(const std::string& name) const {
  for (const auto& f : flows) {
    if (f.flow == name) return f;
  }
  throw std::out_of_range("no metrics for flow " + name);
}

double MetricsReport::overlap(const std::string& a, const std::string& b) const {
  for (const auto& o : overlaps) {
    if ((o.a == a && o.b == b) || (o.a == b && o.b == a)) return o.pct;
  }
  throw std::out_of_range("no overlap for " + a + "/" + b);
}

MetricsReport compute_metrics(const ExperimentSpec& spec,
                              const std::map<std::string, AlarmSignal>& signals) {
  MetricsReport r;
  r.experiment = spec.name;
  r.seed = spec.seed;
  r.horizon_ms = to_ms(spec.plan.horizon());
  for (const auto& [a, b] : comparisons(spec)) {
    r.overlaps.push_back(PairOverlap{a, b, harness::overlap(signals.at(a), signals.at(b))});
  }
  for (const auto& f : spec.flows) {
    FlowMetrics m;
    m.flow = f.name;
    m.transitions = transitions(signals.at(f.name));
    r.flows.push_back(std::move(m));
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  auto prep = prepare(spec);
  RunOutput out;
  try {
    out = spec.clock == ClockMode::kVirtual ? run_virtual(spec, prep) : run_realtime(spec, prep);
  } catch (const flow::FlowError& e) {
    throw ExperimentError(e.what());
  } catch (const fault::ConfigError& e) {
    throw ExperimentError(e.what());
  }

  ExperimentResult result;
  const Duration horizon{spec.plan.horizon()};
  for (const auto& f : spec.flows) {
    result.signals.emplace(f.name, signal_from_events(out.events[f.name], horizon));
  }
  result.report = compute_metrics(spec, result.signals);
  for (auto& m : result.report.flows) {
    m.events = out.events[m.flow].size();
    m.counters = out.counters[m.flow];
  }
  result.report.faults = out.faults;
  result.report.published = prep.emissions.size();
  result.report.logged = out.log.size();
  result.log = std::move(out.log);
  result.events = std::move(out.events);
  return result;
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ExperimentError("experiment spec must be a JSON object");
  static const std::set<std::string> kKeys{"name",  "base",  "dataset",     "datasetOptions",
                                           "replay", "faults", "flows",      "comparisons",
                                           "seed",   "clock",  "timeScale",  "port",
                                           "mirrorPrefix"};
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw ExperimentError("experiment spec: unknown field '" + key + "'");
  }
  ExperimentSpec spec;
  try {
    if (j.contains("base")) {
      auto base = find_builtin(j["base"].get<std::string>());
      if (!base) throw ExperimentError("unknown base experiment " + j["base"].dump());
      spec = *base;
    }
    spec.name = j.value("name", spec.name);
    if (j.contains("dataset")) spec.dataset = j["dataset"].get<std::string>();
    if (j.contains("datasetOptions")) {
      const auto& o = j["datasetOptions"];
      spec.dataset_options.column = o.value("column", spec.dataset_options.column);
      auto sep = o.value("separator", std::string(1, spec.dataset_options.separator));
      if (sep.size() != 1) throw ExperimentError("datasetOptions.separator must be one character");
      spec.dataset_options.separator = sep[0];
      spec.dataset_options.decimal_comma = o.value("decimalComma", spec.dataset_options.decimal_comma);
      spec.dataset_options.missing_marker =
          o.value("missingMarker", spec.dataset_options.missing_marker);
    }
    if (j.contains("replay")) spec.plan = replay::plan_from_json(j["replay"]);
    if (j.contains("faults")) {
      if (j["faults"].is_null()) {
        spec.faults.reset();
      } else {
        spec.faults = j["faults"];
      }
    }
    if (j.contains("flows")) {
      spec.flows.clear();
      for (const auto& f : j["flows"]) spec.flows.push_back(flow::flow_spec_from_json(f));
    }
    if (j.contains("comparisons")) {
      spec.comparisons.clear();
      for (const auto& c : j["comparisons"]) {
        auto pair = c.get<std::vector<std::string>>();
        if (pair.size() != 2) throw ExperimentError("each comparison names two flows");
        spec.comparisons.emplace_back(pair[0], pair[1]);
      }
    }
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("clock")) {
      auto clock = j["clock"].get<std::string>();
      if (clock == "virtual") {
        spec.clock = ClockMode::kVirtual;
      } else if (clock == "realtime") {
        spec.clock = ClockMode::kRealtime;
      } else {
        throw ExperimentError("clock must be virtual or realtime");
      }
    }
    spec.time_scale = j.value("timeScale", spec.time_scale);
    spec.port = j.value("port", spec.port);
    spec.mirror_prefix = j.value("mirrorPrefix", spec.mirror_prefix);
  } catch (const json::exception& e) {
    throw ExperimentError(std::string("experiment spec: ") + e.what());
  } catch (const replay::DatasetError& e) {
    throw ExperimentError(e.what());
  } catch (const flow::FlowError& e) {
    throw ExperimentError(e.what());
  }
  validate_spec(spec);
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  json flows = json::array();
  for (const auto& f : spec.flows) flows.push_back(flow::to_json(f));
  json cmp = json::array();
  for (const auto& [a, b] : comparisons(spec)) cmp.push_back({a, b});
  return json{{"name", spec.name},
              {"dataset", spec.dataset.string()},
              {"datasetOptions",
               {{"column", spec.dataset_options.column},
                {"separator", std::string(1, spec.dataset_options.separator)},
                {"decimalComma", spec.dataset_options.decimal_comma},
                {"missingMarker", spec.dataset_options.missing_marker}}},
              {"replay", replay::to_json(spec.plan)},
              {"faults", spec.faults ? *spec.faults : json(nullptr)},
              {"flows", std::move(flows)},
              {"comparisons", std::move(cmp)},
              {"seed", spec.seed},
              {"clock", spec.clock == ClockMode::kVirtual ? "virtual" : "realtime"},
              {"timeScale", spec.time_scale},
              {"port", spec.port},
              {"mirrorPrefix", spec.mirror_prefix}};
}

}  // namespace faultwire::harness
