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

#include <pthread.h>
#include <signal.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "faultwire/core/log.hpp"
#include "faultwire/core/number_format.hpp"
#include "faultwire/core/realtime_loop.hpp"
#include "faultwire/fault/config.hpp"
#include "faultwire/fault/engine.hpp"
#include "faultwire/flow/flow_spec.hpp"
#include "faultwire/harness/builtin.hpp"
#include "faultwire/harness/experiment.hpp"
#include "faultwire/harness/message_log.hpp"
#include "faultwire/harness/report.hpp"
#include "faultwire/mqtt/broker.hpp"
#include "faultwire/mqtt/tcp.hpp"
#include "faultwire/replay/dataset.hpp"
#include "faultwire/replay/schedule.hpp"

namespace fw = faultwire;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Configuration problems the user can fix in their inputs.
struct ConfigFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFailure("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigFailure(path + ": " + e.what());
  }
}

bool parse_seed_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  auto dots = text.find("..");
  if (dots == std::string::npos) return false;
  try {
    std::size_t used = 0;
    lo = std::stoull(text.substr(0, dots), &used);
    if (used != dots) return false;
    auto tail = text.substr(dots + 2);
    hi = std::stoull(tail, &used);
    return used == tail.size() && lo <= hi;
  } catch (const std::exception&) {
    return false;
  }
}

struct RunArgs {
  std::string experiment;
  std::string spec_file;
  std::string dataset;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out = "out";
  std::string clock = "virtual";
  double time_scale = 1.0;
  std::uint16_t port = 0;
  std::string faults;
  std::optional<std::size_t> start_row;
};

void print_summary(const fw::harness::MetricsReport& r) {
  std::cout << r.experiment << " seed " << r.seed << "\n";
  for (const auto& o : r.overlaps) {
    std::cout << "  overlap(" << o.a << ", " << o.b << ") = " << fw::format_number(o.pct) << "%\n";
  }
  for (const auto& f : r.flows) {
    const auto& t = f.transitions;
    std::cout << "  " << f.flow << ": transitions " << t.total << " (off "
              << t[fw::heal::AlarmLevel::kOff] << ", warn " << t[fw::heal::AlarmLevel::kWarn]
              << ", danger " << t[fw::heal::AlarmLevel::kDanger] << ")\n";
  }
}

fw::harness::ExperimentSpec build_spec(const RunArgs& a) {
  using namespace fw::harness;
  ExperimentSpec spec;
  if (!a.spec_file.empty()) {
    spec = spec_from_json(read_json_file(a.spec_file));
  } else {
    auto builtin = find_builtin(a.experiment);
    if (!builtin) throw ConfigFailure("unknown experiment '" + a.experiment + "' (see list-experiments)");
    spec = *builtin;
  }
  if (!a.dataset.empty()) spec.dataset = a.dataset;
  if (a.seed) spec.seed = *a.seed;
  if (a.start_row) spec.plan.start_row = *a.start_row;
  spec.clock = a.clock == "realtime" ? ClockMode::kRealtime : ClockMode::kVirtual;
  spec.time_scale = a.time_scale;
  spec.port = a.port;
  if (!a.faults.empty()) {
    auto doc = read_json_file(a.faults);
    fw::fault::compile_config(doc);
    if (!spec.faults) {
      // Add the faulted twins of BL and SH.
      auto inputs = fw::flow::default_input_topics(spec.mirror_prefix);
      for (const auto& f : std::vector<fw::flow::FlowSpec>(spec.flows)) {
        if (f.name != "BL" && f.name != "SH") continue;
        auto twin = f;
        twin.name = f.name == "BL" ? "FI" : "FIxSH";
        twin.alarm_topic = "alarm/" + twin.name;
        twin.input_topics = inputs;
        spec.flows.push_back(std::move(twin));
      }
      if (!spec.comparisons.empty()) {
        spec.comparisons.emplace_back("FI", "BL");
        spec.comparisons.emplace_back("FIxSH", "SH");
        spec.comparisons.emplace_back("FI", "FIxSH");
      }
    }
    spec.faults = std::move(doc);
  }
  validate_spec(spec);
  return spec;
}

int cmd_run(const RunArgs& a) {
  auto spec = build_spec(a);
  std::uint64_t lo = spec.seed;
  std::uint64_t hi = spec.seed;
  bool batch = !a.seeds.empty();
  if (batch && !parse_seed_range(a.seeds, lo, hi)) {
    throw ConfigFailure("--seeds expects a..b, got '" + a.seeds + "'");
  }
  for (std::uint64_t seed = lo; seed <= hi; ++seed) {
    spec.seed = seed;
    auto result = fw::harness::run_experiment(spec);
    fs::path dir = fs::path(a.out) / spec.name;
    if (batch) dir /= "seed-" + std::to_string(seed);
    fw::harness::emit_report(result, dir);
    print_summary(result.report);
    std::cout << "  report: " << dir.string() << "\n";
    if (seed == hi) break;
  }
  return 0;
}

int cmd_list() {
  for (const auto& spec : fw::harness::builtin_experiments()) {
    std::string flows;
    for (const auto& f : spec.flows) flows += (flows.empty() ? "" : ",") + f.name;
    std::cout << spec.name << "  flows=" << flows << "  faults="
              << (spec.faults ? spec.faults->at("rules").dump() : std::string("none")) << "\n";
  }
  return 0;
}

struct MetricsArgs {
  std::string a;
  std::string b;
  std::string topic_a;
  std::string topic_b;
  std::int64_t horizon_ms = 600000;
};

int cmd_metrics(const MetricsArgs& m) {
  using namespace fw::harness;
  if (m.horizon_ms <= 0) throw ConfigFailure("--horizon-ms must be positive");
  fw::Duration horizon{m.horizon_ms};
  auto log_a = read_jsonl(m.a);
  auto log_b = read_jsonl(m.b);
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!m.topic_a.empty() || !m.topic_b.empty()) {
    pairs.emplace_back(m.topic_a.empty() ? m.topic_b : m.topic_a,
                       m.topic_b.empty() ? m.topic_a : m.topic_b);
  } else {
    auto topics_b = alarm_topics(log_b);
    for (const auto& t : alarm_topics(log_a)) {
      if (std::find(topics_b.begin(), topics_b.end(), t) != topics_b.end()) pairs.emplace_back(t, t);
    }
    if (pairs.empty()) throw ConfigFailure("the two logs share no alarm topics");
  }
  for (const auto& [ta, tb] : pairs) {
    auto sa = signal_from_log(log_a, ta, horizon);
    auto sb = signal_from_log(log_b, tb, horizon);
    std::cout << ta << " vs " << tb << ": overlap " << fw::format_number(overlap(sa, sb))
              << "%, transitions " << transitions(sa).total << " / " << transitions(sb).total
              << "\n";
  }
  return 0;
}

struct ReplayArgs {
  std::string dataset;
  fw::replay::DatasetOptions options;
  std::string separator = ";";
  fw::replay::ReplayPlan plan;
  std::string host = "127.0.0.1";
  std::uint16_t port = 1883;
  double time_scale = 1.0;
  bool print = false;
};

int cmd_replay(ReplayArgs a) {
  if (a.separator.size() != 1) throw ConfigFailure("--separator must be a single character");
  a.options.separator = a.separator[0];
  auto series = fw::replay::load_dataset(a.dataset.empty() ? fw::harness::default_dataset_path()
                                                           : fs::path(a.dataset),
                                         a.options);
  std::vector<fw::replay::Emission> plan;
  try {
    plan = fw::replay::schedule(series, a.plan);
  } catch (const fw::replay::DatasetError& e) {
    throw ConfigFailure(e.what());
  }
  if (a.print) {
    for (const auto& e : plan) {
      std::cout << e.at.count() << " " << e.topic << " " << fw::format_number(e.value) << "\n";
    }
    return 0;
  }
  if (!(a.time_scale > 0)) throw ConfigFailure("--time-scale must be positive");
  fw::RealtimeLoop loop(a.time_scale);
  loop.start();
  fw::mqtt::TcpClientConnection conn(loop, a.host, a.port, "replay");
  loop.post([&] { conn.client().connect(); });
  auto start = loop.now() + fw::Duration{50};
  for (const auto& e : plan) {
    loop.wait_until(start + fw::Duration{e.at});
    loop.post([&conn, topic = e.topic, value = e.value] {
      conn.client().publish(topic, fw::format_number(value));
    });
  }
  loop.wait_until(loop.now() + fw::Duration{100});
  loop.post([&] { conn.client().disconnect(); });
  loop.wait_until(loop.now() + fw::Duration{100});
  loop.stop();
  conn.close();
  std::cout << "published " << plan.size() << " readings (" << series.dropped_rows
            << " missing rows skipped)\n";
  return 0;
}

struct BrokerArgs {
  std::uint16_t port = 1883;
  std::string bind = "127.0.0.1";
  std::string faults;
  std::string mirror_prefix;
  std::optional<std::uint64_t> seed;
};

int cmd_broker(const BrokerArgs& a) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  fw::RealtimeLoop loop(1.0);
  std::unique_ptr<fw::fault::FaultEngine> engine;
  if (!a.faults.empty()) {
    engine = std::make_unique<fw::fault::FaultEngine>(loop, fw::fault::load_config(a.faults), a.seed);
  }
  fw::mqtt::BrokerOptions options;
  options.enforce_keep_alive = true;
  if (!a.mirror_prefix.empty()) options.mirror = fw::mqtt::MirrorOptions{a.mirror_prefix, "#"};
  fw::mqtt::Broker broker(loop, options);
  if (engine) broker.set_interceptor(engine.get());
  fw::mqtt::TcpServer server(loop, broker, a.port, a.bind);
  loop.start();
  server.start();
  std::cout << "listening on " << a.bind << ":" << server.port() << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  spdlog::info("signal {} received, shutting down", sig);
  loop.stop();
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  fw::init_logging();
  CLI::App app{"MQTT fault-injection testbed for self-healing IoT flows"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write its report");
  auto* exp_opt = run_cmd->add_option("--experiment,-e", run.experiment, "Builtin experiment name");
  auto* spec_opt = run_cmd->add_option("--spec", run.spec_file, "Experiment spec JSON file");
  exp_opt->excludes(spec_opt);
  run_cmd->add_option("--dataset", run.dataset, "Dataset CSV (default: bundled synthetic)");
  run_cmd->add_option("--seed", run.seed, "Experiment seed");
  run_cmd->add_option("--seeds", run.seeds, "Seed range a..b, one report per seed");
  run_cmd->add_option("--out,-o", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--clock", run.clock, "Clock mode")
      ->check(CLI::IsMember({"virtual", "realtime"}))
      ->capture_default_str();
  run_cmd->add_option("--time-scale", run.time_scale, "Realtime: virtual ms per wall ms")
      ->capture_default_str();
  run_cmd->add_option("--port", run.port, "Realtime: broker port (0 picks one)");
  run_cmd->add_option("--faults", run.faults, "Fault config JSON replacing the experiment's");
  run_cmd->add_option("--start-row", run.start_row, "First dataset value to replay");

  app.add_subcommand("list-experiments", "List builtin experiments");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Compare alarm signals of two message logs");
  metrics_cmd->add_option("--a", metrics.a, "First messages.jsonl")->required();
  metrics_cmd->add_option("--b", metrics.b, "Second messages.jsonl")->required();
  metrics_cmd->add_option("--topic-a", metrics.topic_a, "Alarm topic in the first log");
  metrics_cmd->add_option("--topic-b", metrics.topic_b, "Alarm topic in the second log");
  metrics_cmd->add_option("--horizon-ms", metrics.horizon_ms, "Signal horizon")->capture_default_str();

  ReplayArgs replay;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a dataset column to a broker");
  replay_cmd->add_option("--dataset", replay.dataset, "Dataset CSV (default: bundled synthetic)");
  replay_cmd->add_option("--column", replay.options.column, "Column to replay")->capture_default_str();
  replay_cmd->add_option("--count", replay.plan.message_count, "Rounds to replay")->capture_default_str();
  replay_cmd->add_option("--period-ms", replay.plan.period_ms, "Round period")->capture_default_str();
  replay_cmd->add_option("--start-row", replay.plan.start_row, "First value")->capture_default_str();
  replay_cmd->add_option("--jitter-pct", replay.plan.jitter_pct, "Per-sensor deviation fraction");
  replay_cmd->add_option("--seed", replay.plan.jitter_seed, "Jitter seed");
  replay_cmd->add_option("--separator", replay.separator, "Field separator")->capture_default_str();
  replay_cmd->add_option("--decimal-comma", replay.options.decimal_comma, "Values use a decimal comma")
      ->capture_default_str();
  replay_cmd->add_option("--host", replay.host, "Broker host")->capture_default_str();
  replay_cmd->add_option("--port", replay.port, "Broker port")->capture_default_str();
  replay_cmd->add_option("--time-scale", replay.time_scale, "Virtual ms per wall ms")
      ->capture_default_str();
  replay_cmd->add_flag("--print", replay.print, "Print the schedule instead of publishing");

  BrokerArgs broker;
  auto* broker_cmd = app.add_subcommand("broker", "Run a standalone broker until interrupted");
  broker_cmd->add_option("--port", broker.port, "Listen port")->capture_default_str();
  broker_cmd->add_option("--bind", broker.bind, "Bind address")->capture_default_str();
  broker_cmd->add_option("--faults", broker.faults, "Fault config JSON");
  broker_cmd->add_option("--seed", broker.seed, "Override the fault config seed");
  broker_cmd->add_option("--mirror-prefix", broker.mirror_prefix,
                         "Publish faulted copies under this prefix instead of in place");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      if (run.experiment.empty() && run.spec_file.empty()) {
        throw ConfigFailure("run needs --experiment or --spec");
      }
      return cmd_run(run);
    }
    if (app.got_subcommand("list-experiments")) return cmd_list();
    if (*metrics_cmd) return cmd_metrics(metrics);
    if (*replay_cmd) return cmd_replay(replay);
    if (*broker_cmd) return cmd_broker(broker);
  } catch (const ConfigFailure& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fw::harness::ExperimentError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fw::fault::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fw::flow::FlowError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
