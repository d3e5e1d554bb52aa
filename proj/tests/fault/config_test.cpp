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

#include <gtest/gtest.h>

namespace faultwire::fault {
namespace {

using nlohmann::json;

TEST(FaultConfig, StuckAtRule) {
  auto cfg = parse_config(
      R"({"rules":[{"topic":"sensors/3/nox","operators":[{"type":"map","expr":"1000"}],"startAfter":10,"stopAfter":110}]})");
  ASSERT_EQ(cfg.rules.size(), 1u);
  const auto& r = cfg.rules[0];
  EXPECT_EQ(r.topic, "sensors/3/nox");
  EXPECT_EQ(r.start_after, 10u);
  EXPECT_EQ(r.stop_after, 110u);
  ASSERT_EQ(r.operators.size(), 1u);
  EXPECT_EQ(fault_class(r.operators[0]), FaultClass::kCorruption);
  EXPECT_EQ(std::get<MapOp>(r.operators[0]).expr.source(), "1000");
}

TEST(FaultConfig, EmptyRuleSet) {
  auto cfg = parse_config(R"({"rules":[]})");
  EXPECT_TRUE(cfg.rules.empty());
  EXPECT_EQ(cfg.seed, 0u);
}

TEST(FaultConfig, WildcardTopicRejected) {
  try {
    parse_config(R"({"rules":[{"topic":"sensors/+/nox","operators":[{"type":"randomDrop","probability":0.2}]}]})");
    FAIL() << "accepted a wildcard rule";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("wildcard topics unsupported in rules"), std::string::npos)
        << e.what();
  }
}

TEST(FaultConfig, Errors) {
  const char* bad[] = {
      R"([])",
      R"({"rules":{}})",
      R"({"rules":[], "extra":1})",
      R"({"seed":-1, "rules":[]})",
      R"({"rules":[{"topic":"t","operators":[]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"explode"}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"map","expr":"value *"}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"map","expr":"1"}],"startAfter":5,"stopAfter":5}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"map","expr":"1","probability":1.5}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"randomDelay","minMs":10,"maxMs":5}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"buffer"}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"buffer","count":0}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"duplicate"}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"randomDrop","probability":0.1,"p":1}]}]})",
      R"({"rules":[{"topic":"t","operators":[{"type":"randomDrop","probability":0.1}]},
                   {"topic":"t","operators":[{"type":"randomDrop","probability":0.1}]}]})",
      R"({"rules":[{"topic":"","operators":[{"type":"randomDrop","probability":0.1}]}]})",
      R"(not json)",
  };
  for (const char* doc : bad) EXPECT_THROW(parse_config(doc), ConfigError) << doc;
}

TEST(FaultConfig, AllOperatorsCompile) {
  auto cfg = parse_config(R"doc({"seed": 7, "rules":[{"topic":"t","operators":[
      {"type":"map","expr":"value * random(0.2, 2.2)","probability":0.4},
      {"type":"randomDelay","minMs":10,"maxMs":20},
      {"type":"buffer","count":3,"timeoutMs":1000},
      {"type":"randomDrop","probability":0.2},
      {"type":"duplicate","delayMs":6000}]}]})doc");
  EXPECT_EQ(cfg.seed, 7u);
  const auto& ops = cfg.rules.at(0).operators;
  ASSERT_EQ(ops.size(), 5u);
  EXPECT_EQ(fault_class(ops[1]), FaultClass::kDelay);
  EXPECT_EQ(fault_class(ops[2]), FaultClass::kReordering);
  EXPECT_EQ(fault_class(ops[3]), FaultClass::kOmission);
  EXPECT_EQ(fault_class(ops[4]), FaultClass::kDuplication);
  EXPECT_FALSE(cfg.rules[0].stop_after.has_value());

  auto again = compile_config(to_json(cfg));
  EXPECT_EQ(to_json(again), to_json(cfg));
}

TEST(RuleWindow, Boundaries) {
  FaultRule r;
  r.start_after = 10;
  r.stop_after = 110;
  r.counter = 10;
  EXPECT_FALSE(rule_active(r));
  r.counter = 11;
  EXPECT_TRUE(rule_active(r));
  r.counter = 110;
  EXPECT_TRUE(rule_active(r));
  r.counter = 111;
  EXPECT_FALSE(rule_active(r));
}

TEST(RuleWindow, UnboundedStop) {
  FaultRule r;
  r.start_after = 0;
  r.counter = 1;
  EXPECT_TRUE(rule_active(r));
  r.counter = 1'000'000;
  EXPECT_TRUE(rule_active(r));
}

}  // namespace
}  // namespace faultwire::fault
