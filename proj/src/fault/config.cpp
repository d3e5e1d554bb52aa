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

#include "faultwire/fault/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace faultwire::fault {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::int64_t get_ms(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(where + ": '" + key + "' must be a non-negative integer (ms)");
  }
  return v.get<std::int64_t>();
}

std::uint64_t get_count(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(where + ": '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Operator compile_operator(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ConfigError(where + ": operator needs a string 'type'");
  }
  const auto type = j["type"].get<std::string>();
  if (type == "map") {
    check_keys(j, {"type", "expr", "probability"}, where);
    if (!j.contains("expr") || !j["expr"].is_string()) {
      throw ConfigError(where + ": map needs a string 'expr'");
    }
    MapOp op{MapExpr::parse(j["expr"].get<std::string>()), 1.0};
    if (j.contains("probability")) op.probability = get_number(j, "probability", where);
    return op;
  }
  if (type == "randomDelay") {
    check_keys(j, {"type", "minMs", "maxMs"}, where);
    if (!j.contains("maxMs")) throw ConfigError(where + ": randomDelay needs 'maxMs'");
    RandomDelayOp op;
    op.min = Duration{j.contains("minMs") ? get_ms(j, "minMs", where) : 0};
    op.max = Duration{get_ms(j, "maxMs", where)};
    return op;
  }
  if (type == "buffer") {
    check_keys(j, {"type", "count", "timeoutMs"}, where);
    BufferOp op;
    if (j.contains("count") && !j["count"].is_null()) op.count = get_count(j, "count", where);
    if (j.contains("timeoutMs") && !j["timeoutMs"].is_null()) {
      op.timeout = Duration{get_ms(j, "timeoutMs", where)};
    }
    return op;
  }
  if (type == "randomDrop") {
    check_keys(j, {"type", "probability"}, where);
    if (!j.contains("probability")) throw ConfigError(where + ": randomDrop needs 'probability'");
    return RandomDropOp{get_number(j, "probability", where)};
  }
  if (type == "duplicate") {
    check_keys(j, {"type", "delayMs"}, where);
    if (!j.contains("delayMs")) throw ConfigError(where + ": duplicate needs 'delayMs'");
    return DuplicateOp{Duration{get_ms(j, "delayMs", where)}};
  }
  throw ConfigError(where + ": unknown operator '" + type + "'");
}

FaultRule compile_rule(const json& j, std::size_t index) {
  std::string where = "rules[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where + ": rule must be an object");
  check_keys(j, {"topic", "operators", "startAfter", "stopAfter"}, where);
  if (!j.contains("topic") || !j["topic"].is_string()) {
    throw ConfigError(where + ": rule needs a string 'topic'");
  }
  FaultRule rule;
  rule.topic = j["topic"].get<std::string>();
  if (j.contains("startAfter")) rule.start_after = get_count(j, "startAfter", where);
  if (j.contains("stopAfter") && !j["stopAfter"].is_null()) {
    rule.stop_after = get_count(j, "stopAfter", where);
  }
  if (!j.contains("operators") || !j["operators"].is_array()) {
    throw ConfigError(where + ": rule needs an 'operators' array");
  }
  for (std::size_t i = 0; i < j["operators"].size(); ++i) {
    rule.operators.push_back(
        compile_operator(j["operators"][i], where + ".operators[" + std::to_string(i) + "]"));
  }
  try {
    validate_rule(rule);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return rule;
}

}  // namespace

FaultConfig compile_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("fault config must be a JSON object");
  check_keys(doc, {"seed", "rules"}, "fault config");
  FaultConfig config;
  if (doc.contains("seed")) {
    const auto& seed = doc["seed"];
    bool negative = !seed.is_number_unsigned() && seed.is_number_integer() && seed.get<std::int64_t>() < 0;
    if (!seed.is_number_integer() || negative) throw ConfigError("'seed' must be an unsigned integer");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (!doc.contains("rules") || !doc["rules"].is_array()) {
    throw ConfigError("fault config needs a 'rules' array");
  }
  std::set<std::string> topics;
  try {
    for (std::size_t i = 0; i < doc["rules"].size(); ++i) {
      auto rule = compile_rule(doc["rules"][i], i);
      if (!topics.insert(rule.topic).second) {
        throw ConfigError("rules[" + std::to_string(i) + "]: more than one rule for topic '" +
                          rule.topic + "'");
      }
      config.rules.push_back(std::move(rule));
    }
  } catch (const ExprError& e) {
    throw ConfigError(std::string("malformed expression: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fault config: ") + e.what());
  }
  return config;
}

FaultConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("fault config is not valid JSON: ") + e.what());
  }
  return compile_config(doc);
}

FaultConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read fault config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json to_json(const FaultConfig& config) {
  json rules = json::array();
  for (const auto& r : config.rules) {
    json ops = json::array();
    for (const auto& op : r.operators) {
      json o;
      o["type"] = operator_name(op);
      if (const auto* m = std::get_if<MapOp>(&op)) {
        o["expr"] = m->expr.source();
        o["probability"] = m->probability;
      } else if (const auto* d = std::get_if<RandomDelayOp>(&op)) {
        o["minMs"] = d->min.count();
        o["maxMs"] = d->max.count();
      } else if (const auto* b = std::get_if<BufferOp>(&op)) {
        if (b->count) o["count"] = *b->count;
        if (b->timeout) o["timeoutMs"] = b->timeout->count();
      } else if (const auto* x = std::get_if<RandomDropOp>(&op)) {
        o["probability"] = x->probability;
      } else if (const auto* u = std::get_if<DuplicateOp>(&op)) {
        o["delayMs"] = u->delay.count();
      }
      ops.push_back(std::move(o));
    }
    json rule;
    rule["topic"] = r.topic;
    rule["startAfter"] = r.start_after;
    rule["stopAfter"] = r.stop_after ? json(*r.stop_after) : json(nullptr);
    rule["operators"] = std::move(ops);
    rules.push_back(std::move(rule));
  }
  return json{{"seed", config.seed}, {"rules", std::move(rules)}};
}

}  // namespace faultwire::fault
