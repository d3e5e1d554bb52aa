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
#include <string_view>

namespace faultwire {

/// Shortest decimal text that round-trips to `value` ("1000", "87.3").
std::string format_number(double value);

/// Parses a plain decimal number, tolerating surrounding whitespace. Rejects
/// trailing garbage, NaN and infinities.
std::optional<double> parse_number(std::string_view text);

/// Reads a sensor payload: a plain decimal number or a JSON object with a
/// numeric "value" field.
std::optional<double> parse_payload_number(const std::string& payload);

}  // namespace faultwire
