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

#include "faultwire/flow/flow.hpp"

#include <utility>

#include "faultwire/core/number_format.hpp"

namespace faultwire::flow {
namespace {

using nlohmann::json;

constexpr int kTokenBits = 56;

enum class Kind { kMessage, kReading, kGroup, kVote, kValue, kLevel };

struct StageInfo {
  Kind in;
  Kind out;
};

StageInfo stage_info(const std::string& node) {
  if (node == "parse") return {Kind::kMessage, Kind::kReading};
  if (node == "range_filter" || node == "debounce") return {Kind::kReading, Kind::kReading};
  if (node == "join") return {Kind::kReading, Kind::kGroup};
  if (node == "majority_vote") return {Kind::kGroup, Kind::kVote};
  if (node == "compensate") return {Kind::kVote, Kind::kValue};
  if (node == "threshold_alarm") return {Kind::kValue, Kind::kLevel};
  if (node == "report_by_exception") return {Kind::kLevel, Kind::kLevel};
  throw FlowError("unknown node '" + node + "'");
}

bool accepts(const std::string& node, Kind in, Kind produced) {
  // threshold_alarm reads a raw Reading as well as a computed value.
  if (node == "threshold_alarm") return produced == Kind::kValue || produced == Kind::kReading;
  return in == produced;
}

void check_params(const NodeConfig& n, std::initializer_list<const char*> allowed) {
  if (!n.params.is_object()) throw FlowError("node '" + n.node + "': params must be an object");
  for (const auto& [key, _] : n.params.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw FlowError("node '" + n.node + "': unknown parameter '" + key + "'");
  }
}

double num(const NodeConfig& n, const char* key, double fallback) {
  if (!n.params.contains(key)) return fallback;
  const auto& v = n.params[key];
  if (!v.is_number()) throw FlowError("node '" + n.node + "': '" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t ms(const NodeConfig& n, const char* key, std::int64_t fallback) {
  if (!n.params.contains(key)) return fallback;
  const auto& v = n.params[key];
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw FlowError("node '" + n.node + "': '" + key + "' must be a non-negative integer");
  }
  return v.get<std::int64_t>();
}

}  // namespace

Flow::Flow(FlowSpec spec, ArmTimer arm) : spec_(std::move(spec)), arm_(std::move(arm)) {
  if (spec_.name.empty()) throw FlowError("flow needs a name");
  if (spec_.input_topics.empty()) throw FlowError("flow '" + spec_.name + "' has no input topics");
  if (spec_.alarm_topic.empty()) spec_.alarm_topic = "alarm/" + spec_.name;
  try {
    spec_.thresholds.validate();
  } catch (const std::invalid_argument& e) {
    throw FlowError("flow '" + spec_.name + "': " + e.what());
  }
  if (spec_.pipeline.empty()) throw FlowError("flow '" + spec_.name + "' has an empty pipeline");

  if (spec_.variant) {
    auto expected = default_pipeline(*spec_.variant);
    bool same = expected.size() == spec_.pipeline.size();
    for (std::size_t i = 0; same && i < expected.size(); ++i) {
      same = expected[i].node == spec_.pipeline[i].node;
    }
    if (!same) {
      throw FlowError("flow '" + spec_.name + "': pipeline does not match variant " +
                      to_string(*spec_.variant));
    }
  }

  if (spec_.pipeline.front().node != "parse") {
    throw FlowError("flow '" + spec_.name + "': pipeline must start with parse");
  }
  if (spec_.pipeline.back().node != "report_by_exception") {
    throw FlowError("flow '" + spec_.name + "': pipeline must end with report_by_exception");
  }

  Kind produced = Kind::kMessage;
  for (const auto& n : spec_.pipeline) {
    auto info = stage_info(n.node);
    if (!accepts(n.node, info.in, produced)) {
      throw FlowError("flow '" + spec_.name + "': node '" + n.node +
                      "' cannot consume the previous stage's output");
    }
    produced = info.out;

    if (n.node == "parse") {
      check_params(n, {});
      stages_.emplace_back(Parse{});
    } else if (n.node == "range_filter") {
      check_params(n, {"validMin", "validMax"});
      heal::Thresholds t = spec_.thresholds;
      t.valid_min = num(n, "validMin", t.valid_min);
      t.valid_max = num(n, "validMax", t.valid_max);
      if (!(t.valid_min <= t.valid_max)) throw FlowError("range_filter: validMin > validMax");
      stages_.emplace_back(RangeFilter{t});
    } else if (n.node == "debounce") {
      check_params(n, {"windowMs"});
      stages_.emplace_back(Debounce{heal::DebounceNode(Duration{ms(n, "windowMs", 4000)})});
    } else if (n.node == "join") {
      check_params(n, {"count", "timeoutMs"});
      auto count = ms(n, "count", 3);
      if (count < 1) throw FlowError("join: count must be >= 1");
      stages_.emplace_back(
          Join{heal::JoinNode(static_cast<std::size_t>(count), Duration{ms(n, "timeoutMs", 6000)})});
    } else if (n.node == "majority_vote") {
      check_params(n, {"minConsensus", "marginPct"});
      auto min_consensus = ms(n, "minConsensus", 2);
      double margin = num(n, "marginPct", 0.25);
      if (min_consensus < 1 || margin < 0) throw FlowError("majority_vote: invalid parameter");
      stages_.emplace_back(Vote{static_cast<std::size_t>(min_consensus), margin});
    } else if (n.node == "compensate") {
      check_params(n, {"strategies", "timeoutMs", "historyLength", "maxReplays"});
      heal::CompensateNode::Options o;
      if (n.params.contains("strategies")) {
        o.mean_on_no_majority = false;
        o.replay_on_timeout = false;
        if (!n.params["strategies"].is_array()) throw FlowError("compensate: strategies must be a list");
        for (const auto& s : n.params["strategies"]) {
          if (s == "meanOfHistory") {
            o.mean_on_no_majority = true;
          } else if (s == "lastValue") {
            o.replay_on_timeout = true;
          } else {
            throw FlowError("compensate: unknown strategy " + s.dump());
          }
        }
      }
      o.timeout = Duration{ms(n, "timeoutMs", 6000)};
      o.history_length = static_cast<std::size_t>(ms(n, "historyLength", 3));
      o.max_replays = static_cast<std::size_t>(ms(n, "maxReplays", 3));
      if (o.history_length == 0) throw FlowError("compensate: historyLength must be >= 1");
      stages_.emplace_back(Compensate{heal::CompensateNode(o)});
    } else if (n.node == "threshold_alarm") {
      check_params(n, {"warn", "danger"});
      heal::Thresholds t = spec_.thresholds;
      t.warn = num(n, "warn", t.warn);
      t.danger = num(n, "danger", t.danger);
      if (!(t.warn < t.danger)) throw FlowError("threshold_alarm: warn must be below danger");
      stages_.emplace_back(Threshold{t});
    } else {
      check_params(n, {});
      stages_.emplace_back(Rbe{heal::ReportByException(heal::AlarmLevel::kOff)});
    }
  }
}

std::vector<std::string> Flow::stage_names() const {
  std::vector<std::string> names;
  for (const auto& n : spec_.pipeline) names.push_back(n.node);
  return names;
}

std::vector<AlarmEvent> Flow::deliver(const Message& m, Instant now) {
  std::vector<AlarmEvent> out;
  ++counters_.received;
  auto value = parse_payload_number(m.payload);
  if (!value) {
    ++counters_.malformed;
    return out;
  }
  push(1, heal::Reading{m.topic, *value, now}, now, out);
  return out;
}

std::vector<AlarmEvent> Flow::on_timer(TimerId id, Instant now) {
  std::vector<AlarmEvent> out;
  auto stage = static_cast<std::size_t>(id >> kTokenBits);
  auto token = id & ((TimerId{1} << kTokenBits) - 1);
  if (stage >= stages_.size()) return out;
  if (auto* join = std::get_if<Join>(&stages_[stage])) {
    if (auto partial = join->node.on_timer(token)) {
      ++counters_.partial_groups;
      push(stage + 1, std::move(*partial), now, out);
    }
  } else if (auto* comp = std::get_if<Compensate>(&stages_[stage])) {
    push_compensate_output(stage, comp->node.on_timer(token, now), now, out);
  }
  return out;
}

void Flow::arm(std::size_t stage, const std::optional<heal::TimerArm>& t) {
  if (!t || !arm_) return;
  arm_(t->at, (static_cast<TimerId>(stage) << kTokenBits) | t->token);
}

void Flow::push_compensate_output(std::size_t stage, const heal::CompensateNode::Output& o,
                                  Instant now, std::vector<AlarmEvent>& out) {
  arm(stage, o.timer);
  if (!o.value) return;
  if (o.compensated) ++counters_.compensated;
  push(stage + 1, *o.value, now, out);
}

void Flow::push(std::size_t stage, Datum d, Instant now, std::vector<AlarmEvent>& out) {
  if (stage >= stages_.size()) return;
  auto& s = stages_[stage];

  if (auto* rf = std::get_if<RangeFilter>(&s)) {
    auto r = heal::range_filter(std::get<heal::Reading>(d), rf->thresholds);
    if (!r) {
      ++counters_.discarded;
      return;
    }
    push(stage + 1, std::move(*r), now, out);
  } else if (auto* db = std::get_if<Debounce>(&s)) {
    auto r = db->node.step(std::get<heal::Reading>(d));
    if (!r) {
      ++counters_.discarded;
      return;
    }
    push(stage + 1, std::move(*r), now, out);
  } else if (auto* join = std::get_if<Join>(&s)) {
    auto res = join->node.step(std::get<heal::Reading>(d));
    arm(stage, res.timer);
    if (res.group) {
      ++counters_.groups;
      push(stage + 1, std::move(*res.group), now, out);
    }
  } else if (auto* vote = std::get_if<Vote>(&s)) {
    const auto& group = std::get<std::vector<heal::Reading>>(d);
    std::vector<double> values;
    values.reserve(group.size());
    for (const auto& r : group) values.push_back(r.value);
    auto v = heal::majority_vote(values, vote->min_consensus, vote->margin);
    if (!v) ++counters_.no_majority;
    push(stage + 1, VoteResult{v}, now, out);
  } else if (auto* comp = std::get_if<Compensate>(&s)) {
    const auto& v = std::get<VoteResult>(d);
    push_compensate_output(stage, v.value ? comp->node.on_value(*v.value, now)
                                          : comp->node.on_no_majority(now),
                           now, out);
  } else if (auto* th = std::get_if<Threshold>(&s)) {
    double value = std::holds_alternative<double>(d) ? std::get<double>(d)
                                                     : std::get<heal::Reading>(d).value;
    push(stage + 1, heal::threshold_alarm(value, th->thresholds), now, out);
  } else if (auto* rbe = std::get_if<Rbe>(&s)) {
    if (auto level = rbe->node.step(std::get<heal::AlarmLevel>(d))) {
      out.push_back(AlarmEvent{spec_.name, *level, now});
    }
  }
}

Flow build_flow(const FlowSpec& spec, Flow::ArmTimer arm) { return Flow(spec, std::move(arm)); }

}  // namespace faultwire::flow
