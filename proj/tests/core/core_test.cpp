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

#include <future>
#include <random>

#include "faultwire/core/number_format.hpp"
#include "faultwire/core/realtime_loop.hpp"
#include "faultwire/core/virtual_scheduler.hpp"

namespace faultwire {
namespace {

TEST(VirtualScheduler, OrdersByInstantThenPostingOrder) {
  VirtualScheduler s;
  std::vector<std::string> seen;
  s.post_at(Instant{20}, [&] { seen.push_back("b"); });
  s.post_at(Instant{10}, [&] { seen.push_back("a"); });
  s.post_at(Instant{20}, [&] { seen.push_back("c"); });
  s.post_at(Instant{20}, [&] {
    seen.push_back("d");
    // Posted during the same instant: runs after the tasks already queued.
    s.post([&] { seen.push_back("f"); });
  });
  s.post_at(Instant{20}, [&] { seen.push_back("e"); });
  EXPECT_EQ(s.run(), 6u);
  EXPECT_EQ(seen, (std::vector<std::string>{"a", "b", "c", "d", "e", "f"}));
  EXPECT_EQ(s.now(), Instant{20});
}

TEST(VirtualScheduler, PastInstantRunsNow) {
  VirtualScheduler s;
  Instant at{-1};
  s.post_at(Instant{50}, [&] { s.post_at(Instant{10}, [&] { at = s.now(); }); });
  s.run();
  EXPECT_EQ(at, Instant{50});
}

TEST(VirtualScheduler, RunUntil) {
  VirtualScheduler s;
  int n = 0;
  for (int i = 1; i <= 5; ++i) s.post_at(Instant{i * 100}, [&] { ++n; });
  EXPECT_EQ(s.run_until(Instant{300}), 3u);
  EXPECT_EQ(n, 3);
  EXPECT_EQ(s.now(), Instant{300});
  EXPECT_EQ(s.pending(), 2u);
  s.run();
  EXPECT_TRUE(s.idle());
}

TEST(VirtualScheduler, ClockNeverGoesBackwards) {
  std::mt19937 gen(4);
  VirtualScheduler s;
  Instant last{0};
  bool monotone = true;
  std::function<void()> spawn = [&] {
    monotone = monotone && s.now() >= last;
    last = s.now();
    if (s.pending() < 200) {
      s.post_after(Duration{std::uniform_int_distribution<int>(0, 50)(gen)}, spawn);
      s.post_at(Instant{std::uniform_int_distribution<int>(0, 5000)(gen)}, spawn);
    }
  };
  s.post(spawn);
  s.run_until(Instant{10000});
  EXPECT_TRUE(monotone);
}

TEST(RealtimeLoop, RunsTasksOnLoopThreadInOrder) {
  RealtimeLoop loop(100.0);
  loop.start();
  std::promise<std::vector<int>> done;
  auto seen = std::make_shared<std::vector<int>>();
  loop.post_at(Instant{200}, [&, seen] {
    seen->push_back(2);
    EXPECT_TRUE(loop.on_loop_thread());
    done.set_value(*seen);
  });
  loop.post_at(Instant{100}, [seen] { seen->push_back(1); });
  auto got = done.get_future();
  ASSERT_EQ(got.wait_for(std::chrono::seconds(5)), std::future_status::ready);
  EXPECT_EQ(got.get(), (std::vector<int>{1, 2}));
  EXPECT_GE(loop.now(), Instant{200});
  loop.stop();
}

TEST(NumberFormat, ShortestRoundTrip) {
  EXPECT_EQ(format_number(1000), "1000");
  EXPECT_EQ(format_number(87.3), "87.3");
  EXPECT_EQ(format_number(0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(-12.5), "-12.5");
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    double v = u(gen);
    auto back = parse_number(format_number(v));
    ASSERT_TRUE(back);
    ASSERT_EQ(*back, v);
  }
}

TEST(NumberFormat, Parse) {
  EXPECT_EQ(parse_number(" 42 "), 42);
  EXPECT_EQ(parse_number("+1.5"), 1.5);
  EXPECT_EQ(parse_number("-3"), -3);
  EXPECT_FALSE(parse_number(""));
  EXPECT_FALSE(parse_number("12abc"));
  EXPECT_FALSE(parse_number("nan"));
  EXPECT_FALSE(parse_number("inf"));
  EXPECT_FALSE(parse_number("1,5"));
}

TEST(NumberFormat, PayloadNumber) {
  EXPECT_EQ(parse_payload_number("87.3"), 87.3);
  EXPECT_EQ(parse_payload_number(R"({"value": 12, "unit": "ppb"})"), 12);
  EXPECT_FALSE(parse_payload_number(R"({"value": "12"})"));
  EXPECT_FALSE(parse_payload_number(R"({"reading": 12})"));
  EXPECT_FALSE(parse_payload_number("[12]"));
  EXPECT_FALSE(parse_payload_number("hello"));
}

}  // namespace
}  // namespace faultwire
