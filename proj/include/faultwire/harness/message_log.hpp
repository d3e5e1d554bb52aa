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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "faultwire/core/time.hpp"
#include "faultwire/harness/signal.hpp"

namespace faultwire::harness {

enum class LogOrigin : std::uint8_t { kClient, kInjected, kFlow };

const char* to_string(LogOrigin o);
std::optional<LogOrigin> origin_from_string(std::string_view s);

struct LogEntry {
  Instant at{0};
  std::string topic;
  std::string payload;
  LogOrigin origin = LogOrigin::kClient;

  bool operator==(const LogEntry&) const = default;
};

using MessageLog = std::vector<LogEntry>;

nlohmann::json to_json(const LogEntry& e);
LogEntry log_entry_from_json(const nlohmann::json& j);

/// One compact JSON object per line, each line newline-terminated.
std::string to_jsonl(const MessageLog& log);
MessageLog parse_jsonl(std::string_view text);
MessageLog read_jsonl(const std::filesystem::path& path);

/// Rebuilds an alarm signal from the level payloads ("0", "1", "2") logged on
/// `topic`. Unparseable payloads are skipped.
AlarmSignal signal_from_log(const MessageLog& log, std::string_view topic, Duration horizon);

/// Topics that carry flow output, in first-seen order.
std::vector<std::string> alarm_topics(const MessageLog& log);

}  // namespace faultwire::harness
