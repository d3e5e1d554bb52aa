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

#include "faultwire/mqtt/topic.hpp"

#include <algorithm>

#include "faultwire/mqtt/codec.hpp"
#include "faultwire/mqtt/message.hpp"

namespace faultwire::mqtt {

bool has_wildcards(std::string_view topic) {
  return topic.find_first_of("+#") != std::string_view::npos;
}

bool is_valid_topic_name(std::string_view topic) {
  return !topic.empty() && topic.size() <= 0xFFFF && !has_wildcards(topic) &&
         is_valid_utf8(topic);
}

bool is_valid_topic_filter(std::string_view filter) {
  if (filter.empty() || filter.size() > 0xFFFF || !is_valid_utf8(filter)) return false;
  std::size_t start = 0;
  while (true) {
    auto end = filter.find('/', start);
    bool last = end == std::string_view::npos;
    auto level = filter.substr(start, last ? std::string_view::npos : end - start);
    if (level.find('#') != std::string_view::npos && (level != "#" || !last)) return false;
    if (level.find('+') != std::string_view::npos && level != "+") return false;
    if (last) return true;
    start = end + 1;
  }
}

bool topic_matches(std::string_view filter, std::string_view topic) {
  if (!topic.empty() && topic.front() == '$' && !filter.empty() &&
      (filter.front() == '+' || filter.front() == '#')) {
    return false;
  }
  std::size_t fi = 0;
  std::size_t ti = 0;
  while (true) {
    auto fend = filter.find('/', fi);
    auto flevel = filter.substr(fi, fend == std::string_view::npos ? std::string_view::npos : fend - fi);
    if (flevel == "#") return true;  // also matches the parent level ("a/#" matches "a")

    auto tend = topic.find('/', ti);
    auto tlevel = topic.substr(ti, tend == std::string_view::npos ? std::string_view::npos : tend - ti);
    if (flevel != "+" && flevel != tlevel) return false;

    bool fdone = fend == std::string_view::npos;
    bool tdone = tend == std::string_view::npos;
    if (fdone && tdone) return true;
    if (fdone) return false;
    if (tdone) {
      // Topic exhausted; only a trailing "/#" can still match.
      return filter.substr(fend + 1) == "#";
    }
    fi = fend + 1;
    ti = tend + 1;
  }
}


std::vector<Delivery> route(const std::vector<Subscription>& subscriptions, const Message& m) {
  std::vector<Delivery> out;
  for (const auto& sub : subscriptions) {
    if (!topic_matches(sub.filter, m.topic)) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Delivery& d) { return d.client_id == sub.client_id; });
    if (it == out.end()) {
      out.push_back(Delivery{sub.client_id, sub.qos});
    } else {
      it->qos = std::max(it->qos, sub.qos);
    }
  }
  for (auto& d : out) d.qos = std::min(d.qos, m.qos);
  return out;
}

}  // namespace faultwire::mqtt
