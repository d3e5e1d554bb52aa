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

#include "faultwire/fault/pipeline.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "faultwire/core/number_format.hpp"

namespace faultwire::fault {

std::string rewrite_payload(const std::string& payload, double value) {
  if (parse_number(payload)) return format_number(value);
  auto doc = nlohmann::json::parse(payload, nullptr, false);
  if (doc.is_object()) {
    doc["value"] = value;
    return doc.dump();
  }
  return format_number(value);
}

Pipeline::Pipeline(FaultRule rule, std::uint64_t stream_seed)
    : rule_(std::move(rule)), rng_(stream_seed), buffers_(rule_.operators.size()) {}

std::size_t Pipeline::held() const {
  std::size_t n = 0;
  for (const auto& b : buffers_) n += b.held.size();
  return n;
}

PipelineOutput Pipeline::apply(const Message& m, Instant now) {
  return run_from(0, {Emission{m, now}}, now);
}

PipelineOutput Pipeline::on_timeout(std::size_t op_index, std::uint64_t token, Instant now) {
  if (op_index >= buffers_.size()) return {};
  auto& buf = buffers_[op_index];
  if (buf.epoch != token || buf.held.empty()) return {};
  std::vector<Emission> released = std::move(buf.held);
  buf.held.clear();
  ++buf.epoch;
  for (auto& e : released) e.due = now;
  stats_.flushed += released.size();
  return run_from(op_index + 1, std::move(released), now);
}

void Pipeline::apply_map(const MapOp& op, std::vector<Emission>& pending) {
  for (auto& e : pending) {
    if (op.probability < 1.0 && !rng_.chance(op.probability)) continue;
    auto value = parse_payload_number(e.message.payload);
    if (!value) {
      ++stats_.map_skipped;
      spdlog::warn("fault: map on '{}' skipped, payload is not numeric", e.message.topic);
      continue;
    }
    double out = 0;
    try {
      out = op.expr.eval(*value, rng_);
    } catch (const ExprError& err) {
      ++stats_.map_skipped;
      spdlog::warn("fault: map on '{}' skipped: {}", e.message.topic, err.what());
      continue;
    }
    if (!std::isfinite(out)) {
      ++stats_.map_skipped;
      spdlog::warn("fault: map on '{}' produced a non-finite value", e.message.topic);
      continue;
    }
    ++stats_.mapped;
    if (out != *value) e.message.payload = rewrite_payload(e.message.payload, out);
  }
}

PipelineOutput Pipeline::run_from(std::size_t first_op, std::vector<Emission> pending, Instant now) {
  PipelineOutput out;
  for (std::size_t i = first_op; i < rule_.operators.size() && !pending.empty(); ++i) {
    const auto& op = rule_.operators[i];
    if (const auto* map = std::get_if<MapOp>(&op)) {
      apply_map(*map, pending);
    } else if (const auto* drop = std::get_if<RandomDropOp>(&op)) {
      std::vector<Emission> kept;
      kept.reserve(pending.size());
      for (auto& e : pending) {
        if (rng_.chance(drop->probability)) {
          ++stats_.dropped;
        } else {
          kept.push_back(std::move(e));
        }
      }
      pending = std::move(kept);
    } else if (const auto* delay = std::get_if<RandomDelayOp>(&op)) {
      for (auto& e : pending) {
        e.due += Duration{rng_.uniform_int(delay->min.count(), delay->max.count())};
        ++stats_.delayed;
      }
    } else if (const auto* dup = std::get_if<DuplicateOp>(&op)) {
      std::vector<Emission> doubled;
      doubled.reserve(pending.size() * 2);
      for (auto& e : pending) {
        Emission copy = e;
        copy.due += dup->delay;
        doubled.push_back(std::move(e));
        doubled.push_back(std::move(copy));
        ++stats_.duplicated;
      }
      pending = std::move(doubled);
    } else if (const auto* bufop = std::get_if<BufferOp>(&op)) {
      auto& buf = buffers_[i];
      std::vector<Emission> released;
      for (auto& e : pending) {
        if (buf.held.empty() && bufop->timeout) {
          out.timers.push_back(TimerRequest{now + *bufop->timeout, i, buf.epoch});
        }
        buf.held.push_back(std::move(e));
        ++stats_.buffered;
        if (bufop->count && buf.held.size() >= *bufop->count) {
          for (auto& h : buf.held) {
            h.due = now;
            released.push_back(std::move(h));
          }
          stats_.flushed += buf.held.size();
          buf.held.clear();
          ++buf.epoch;
        }
      }
      pending = std::move(released);
    }
  }
  for (auto& e : pending) out.emissions.push_back(std::move(e));
  return out;
}

}  // namespace faultwire::fault
