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

#include <gtest/gtest.h>

#include <random>

#include "faultwire/harness/signal.hpp"

namespace faultwire::harness {
namespace {

using heal::AlarmLevel;
using namespace std::chrono_literals;

AlarmSignal make(Duration horizon, std::vector<std::pair<std::int64_t, AlarmLevel>> changes) {
  AlarmSignal s(horizon);
  for (auto [at, l] : changes) s.set(Instant{at}, l);
  return s;
}

TEST(Overlap, Examples) {
  auto a = make(600000ms, {{100000, AlarmLevel::kWarn}, {160000, AlarmLevel::kOff}});
  EXPECT_DOUBLE_EQ(overlap(a, a), 100);
  EXPECT_DOUBLE_EQ(overlap(a, AlarmSignal(600000ms)), 90);
  auto half = make(600000ms, {{300000, AlarmLevel::kDanger}});
  EXPECT_DOUBLE_EQ(overlap(half, AlarmSignal(600000ms)), 50);
  auto full = make(600000ms, {{0, AlarmLevel::kDanger}});
  EXPECT_DOUBLE_EQ(overlap(full, AlarmSignal(600000ms)), 0);
  EXPECT_DOUBLE_EQ(overlap(full, half), 50);
}

TEST(Overlap, HorizonMismatchThrows) {
  EXPECT_THROW(overlap(AlarmSignal(1000ms), AlarmSignal(2000ms)), std::invalid_argument);
  EXPECT_THROW(AlarmSignal(0ms), std::invalid_argument);
}

TEST(AlarmSignal, SetSemantics) {
  AlarmSignal s(1000ms);
  s.set(Instant{100}, AlarmLevel::kWarn);
  s.set(Instant{100}, AlarmLevel::kDanger);
  EXPECT_EQ(s.breakpoints(), (std::vector<Breakpoint>{{Instant{0}, AlarmLevel::kOff},
                                                      {Instant{100}, AlarmLevel::kDanger}}));
  s.set(Instant{100}, AlarmLevel::kOff);
  EXPECT_EQ(s.breakpoints().size(), 1u);
  s.set(Instant{200}, AlarmLevel::kOff);
  EXPECT_EQ(s.breakpoints().size(), 1u);
  s.set(Instant{1000}, AlarmLevel::kDanger);
  EXPECT_EQ(s.breakpoints().size(), 1u);
  s.set(Instant{300}, AlarmLevel::kWarn);
  EXPECT_THROW(s.set(Instant{250}, AlarmLevel::kOff), std::invalid_argument);
  EXPECT_EQ(s.level_at(Instant{299}), AlarmLevel::kOff);
  EXPECT_EQ(s.level_at(Instant{300}), AlarmLevel::kWarn);
  EXPECT_EQ(s.level_at(Instant{999}), AlarmLevel::kWarn);
}

TEST(Transitions, CountedByDestination) {
  auto s = make(600000ms, {{1000, AlarmLevel::kWarn}, {2000, AlarmLevel::kDanger}, {3000, AlarmLevel::kWarn}});
  auto t = transitions(s);
  EXPECT_EQ(t[AlarmLevel::kWarn], 2u);
  EXPECT_EQ(t[AlarmLevel::kDanger], 1u);
  EXPECT_EQ(t[AlarmLevel::kOff], 0u);
  EXPECT_EQ(t.total, 3u);
  EXPECT_EQ(transitions(AlarmSignal(600000ms)).total, 0u);
}

TEST(Transitions, ChangeAtZeroCounts) {
  auto s = make(1000ms, {{0, AlarmLevel::kDanger}});
  EXPECT_TRUE(s.starts_changed());
  EXPECT_EQ(transitions(s)[AlarmLevel::kDanger], 1u);
  s.set(Instant{0}, AlarmLevel::kOff);
  EXPECT_EQ(transitions(s).total, 0u);
}

struct Dense {
  std::vector<int> level;
};

// Replays the changes onto a per-millisecond array.
Dense dense(std::int64_t horizon, const std::vector<std::pair<std::int64_t, AlarmLevel>>& changes) {
  Dense d{std::vector<int>(static_cast<std::size_t>(horizon), 0)};
  for (auto [at, l] : changes) {
    for (std::int64_t t = at; t < horizon; ++t) d.level[static_cast<std::size_t>(t)] = heal::level_index(l);
  }
  return d;
}

std::vector<std::pair<std::int64_t, AlarmLevel>> random_changes(std::mt19937& gen, std::int64_t horizon) {
  std::vector<std::pair<std::int64_t, AlarmLevel>> c;
  int n = std::uniform_int_distribution<int>(0, 25)(gen);
  std::int64_t t = 0;
  for (int i = 0; i < n; ++i) {
    // Zero steps exercise same-instant replacement; some land past the horizon.
    t += std::uniform_int_distribution<std::int64_t>(0, horizon / 10)(gen);
    c.emplace_back(t, static_cast<AlarmLevel>(std::uniform_int_distribution<int>(0, 2)(gen)));
  }
  return c;
}

TEST(OverlapProperty, MatchesDenseSampling) {
  std::mt19937 gen(1234);
  const std::int64_t horizon = 20000;
  for (int trial = 0; trial < 50; ++trial) {
    auto ca = random_changes(gen, horizon);
    auto cb = random_changes(gen, horizon);
    auto da = dense(horizon, ca);
    auto db = dense(horizon, cb);
    std::int64_t same = 0;
    for (std::size_t t = 0; t < da.level.size(); ++t) same += da.level[t] == db.level[t];
    double expected = 100.0 * static_cast<double>(same) / static_cast<double>(horizon);
    auto a = make(Duration{horizon}, ca);
    auto b = make(Duration{horizon}, cb);
    EXPECT_NEAR(overlap(a, b), expected, 0.1);
    EXPECT_DOUBLE_EQ(overlap(a, b), overlap(b, a));
    EXPECT_DOUBLE_EQ(overlap(a, a), 100);
    EXPECT_GE(overlap(a, b), 0);
    EXPECT_LE(overlap(a, b), 100);

    std::array<std::uint64_t, 3> by{};
    std::uint64_t total = 0;
    int prev = 0;
    for (int l : da.level) {
      if (l != prev) {
        ++by[static_cast<std::size_t>(l)];
        ++total;
      }
      prev = l;
    }
    auto t = transitions(a);
    EXPECT_EQ(t.by_level, by);
    EXPECT_EQ(t.total, total);
  }
}

}  // namespace
}  // namespace faultwire::harness
