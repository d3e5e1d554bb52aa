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

#include <gtest/gtest.h>

#include "faultwire/mqtt/message.hpp"

namespace faultwire::mqtt {
namespace {

struct MatchCase {
  const char* filter;
  const char* topic;
  bool expected;
};

const MatchCase kCases[] = {
    {"sensors/+/nox", "sensors/3/nox", true},
    {"sensors/#", "sensors/3/nox", true},
    {"sensors/3/nox", "sensors/2/nox", false},
    {"sensors/3/nox", "sensors/3/nox", true},
    {"#", "sensors/3/nox", true},
    {"#", "a", true},
    {"+", "a", true},
    {"+", "a/b", false},
    {"+/+", "a/b", true},
    {"a/+", "a/b/c", false},
    {"a/+/c", "a/b/c", true},
    {"a/+/c", "a/b/d", false},
    {"a/#", "a", true},
    {"a/#", "a/", true},
    {"a/+", "a/", true},
    {"a/b", "a/b/", false},
    {"+/b", "/b", true},
    {"/#", "/a/b", true},
    {"sensors/+", "sensors", false},
    {"sensors/+/nox", "sensors//nox", true},
    {"#", "$SYS/broker", false},
    {"+/broker", "$SYS/broker", false},
    {"$SYS/#", "$SYS/broker", true},
    {"$SYS/+", "$SYS/broker", true},
    {"a/#", "b/a", false},
    {"faulted/sensors/+/nox", "faulted/sensors/1/nox", true},
    {"faulted/sensors/+/nox", "sensors/1/nox", false},
    {"A/b", "a/b", false},
};

TEST(TopicMatch, Table) {
  std::size_t n = 0;
  for (const auto& c : kCases) {
    EXPECT_EQ(topic_matches(c.filter, c.topic), c.expected) << c.filter << " vs " << c.topic;
    ++n;
  }
  EXPECT_GE(n, 20u);
}

TEST(TopicMatch, ReflexiveOnWildcardFreeTopics) {
  for (const char* t : {"a", "a/b", "/", "a//b", "sensors/3/nox", "$SYS/x", "é/ü"}) {
    EXPECT_TRUE(topic_matches(t, t)) << t;
  }
}

TEST(TopicMatch, PlusNeverSpansLevels) {
  for (const char* t : {"x/y/w/z", "x/y/z/w", "x/z", "x/a/b/z"}) {
    EXPECT_FALSE(topic_matches("x/+/z", t)) << t;
  }
  EXPECT_FALSE(topic_matches("x/+", "x/y/z"));
}

TEST(TopicValidation, Filters) {
  EXPECT_TRUE(is_valid_topic_filter("a/+/b"));
  EXPECT_TRUE(is_valid_topic_filter("#"));
  EXPECT_TRUE(is_valid_topic_filter("a/#"));
  EXPECT_FALSE(is_valid_topic_filter(""));
  EXPECT_FALSE(is_valid_topic_filter("a/#/b"));
  EXPECT_FALSE(is_valid_topic_filter("a#"));
  EXPECT_FALSE(is_valid_topic_filter("a+/b"));
  EXPECT_FALSE(is_valid_topic_filter("a/b+"));
}

TEST(TopicValidation, Names) {
  EXPECT_TRUE(is_valid_topic_name("a/b"));
  EXPECT_FALSE(is_valid_topic_name(""));
  EXPECT_FALSE(is_valid_topic_name("a/+"));
  EXPECT_FALSE(is_valid_topic_name("#"));
  EXPECT_TRUE(has_wildcards("a/#"));
  EXPECT_FALSE(has_wildcards("a/b"));
}

Message msg(const std::string& topic, std::uint8_t qos) { return Message{topic, "1", Instant{0}, qos}; }

TEST(Route, EffectiveQosIsMinimum) {
  std::vector<Subscription> subs{{"c1", "a/#", 0}};
  auto d = route(subs, msg("a/b", 1));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].client_id, "c1");
  EXPECT_EQ(d[0].qos, 0);
}

TEST(Route, NoSubscribers) { EXPECT_TRUE(route({}, msg("a/b", 0)).empty()); }

TEST(Route, SubscriptionOrderIsKept) {
  std::vector<Subscription> subs{{"c2", "a/b", 0}, {"c1", "a/b", 1}};
  auto d = route(subs, msg("a/b", 1));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].client_id, "c2");
  EXPECT_EQ(d[1].client_id, "c1");
  EXPECT_EQ(d[1].qos, 1);
}

TEST(Route, OverlappingFiltersCollapseAtHighestQos) {
  std::vector<Subscription> subs{{"c1", "a/+", 0}, {"c2", "x", 0}, {"c1", "a/#", 1}};
  auto d = route(subs, msg("a/b", 1));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].client_id, "c1");
  EXPECT_EQ(d[0].qos, 1);
}

}  // namespace
}  // namespace faultwire::mqtt
