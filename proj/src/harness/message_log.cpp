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

#include "faultwire/harness/message_log.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "faultwire/core/number_format.hpp"

namespace faultwire::harness {

using nlohmann::json;

const char* to_string(LogOrigin o) {
  switch (o) {
    case LogOrigin::kClient:
      return "client";
    case LogOrigin::kInjected:
      return "injected";
    case LogOrigin::kFlow:
      return "flow";
  }
  return "?";
}

std::optional<LogOrigin> origin_from_string(std::string_view s) {
  if (s == "client") return LogOrigin::kClient;
  if (s == "injected") return LogOrigin::kInjected;
  if (s == "flow") return LogOrigin::kFlow;
  return std::nullopt;
}

json to_json(const LogEntry& e) {
  json j = json::object();
  j["instantMs"] = to_ms(e.at);
  j["topic"] = e.topic;
  j["payload"] = e.payload;
  j["origin"] = to_string(e.origin);
  return j;
}

LogEntry log_entry_from_json(const json& j) {
  LogEntry e;
  e.at = Instant{j.at("instantMs").get<std::int64_t>()};
  e.topic = j.at("topic").get<std::string>();
  e.payload = j.at("payload").get<std::string>();
  auto origin = origin_from_string(j.at("origin").get<std::string>());
  if (!origin) throw std::invalid_argument("unknown log origin " + j.at("origin").dump());
  e.origin = *origin;
  return e;
}

std::string to_jsonl(const MessageLog& log) {
  std::string out;
  for (const auto& e : log) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

MessageLog parse_jsonl(std::string_view text) {
  MessageLog log;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = std::min(text.find('\n', pos), text.size());
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      log.push_back(log_entry_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

MessageLog read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_jsonl(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

AlarmSignal signal_from_log(const MessageLog& log, std::string_view topic, Duration horizon) {
  AlarmSignal s(horizon);
  for (const auto& e : log) {
    if (e.topic != topic) continue;
    auto v = parse_number(e.payload);
    if (!v || *v != static_cast<int>(*v)) continue;
    if (auto level = heal::level_from_int(static_cast<int>(*v))) s.set(e.at, *level);
  }
  return s;
}

std::vector<std::string> alarm_topics(const MessageLog& log) {
  std::vector<std::string> topics;
  for (const auto& e : log) {
    if (e.origin != LogOrigin::kFlow) continue;
    if (std::find(topics.begin(), topics.end(), e.topic) == topics.end()) topics.push_back(e.topic);
  }
  return topics;
}

}  // namespace faultwire::harness
