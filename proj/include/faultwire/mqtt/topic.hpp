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

#include <string_view>

namespace faultwire::mqtt {

bool has_wildcards(std::string_view topic);

/// Non-empty, valid UTF-8 topic without `+` or `#`.
bool is_valid_topic_name(std::string_view topic);

/// `#` only as the whole final level, `+` only as a whole level.
bool is_valid_topic_filter(std::string_view filter);

/// MQTT level matching. Topics starting with `$` never match a filter whose
/// first level is a wildcard.
bool topic_matches(std::string_view filter, std::string_view topic);

}  // namespace faultwire::mqtt
