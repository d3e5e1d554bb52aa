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

#include <fstream>
#include <sstream>

#include "faultwire/harness/builtin.hpp"
#include "faultwire/harness/report.hpp"

namespace faultwire::harness {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class ReportTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("faultwire_report_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(ReportTest, WritesAllArtifacts) {
  auto r = run_experiment(*find_builtin("S2E2"));
  emit_report(r, dir_);
  for (const char* f : {"metrics.json", "metrics.csv", "messages.jsonl", "timeline.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / f)) << f;
  }

  auto j = nlohmann::json::parse(slurp(dir_ / "metrics.json"));
  EXPECT_EQ(j, nlohmann::json::parse(to_json(r.report).dump()));
  EXPECT_EQ(j["experiment"], "S2E2");
  EXPECT_EQ(j["horizonMs"], 600000);
  EXPECT_EQ(j["flows"].size(), 4u);
  EXPECT_EQ(j["overlaps"].size(), r.report.overlaps.size());
  EXPECT_FALSE(j["faults"].is_null());

  auto csv = slurp(dir_ / "metrics.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "kind,a,b,overlap_pct,off,warn,danger,total,events,received,malformed,discarded,compensated");
  EXPECT_EQ(lines(csv), 1 + r.report.overlaps.size() + r.report.flows.size());

  auto log = read_jsonl(dir_ / "messages.jsonl");
  EXPECT_EQ(log, r.log);
  EXPECT_EQ(lines(slurp(dir_ / "messages.jsonl")), r.log.size());

  auto svg = slurp(dir_ / "timeline.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("FIxSH"), std::string::npos);
}

TEST_F(ReportTest, NoFaultReportHasNullFaults) {
  auto r = run_experiment(*find_builtin("S1E1"));
  auto j = to_json(r.report);
  EXPECT_TRUE(j["faults"].is_null());
  EXPECT_EQ(j["overlaps"].size(), 1u);
  EXPECT_EQ(j["overlaps"][0]["a"], "BL");
  auto t = j["flows"][0]["transitions"];
  EXPECT_EQ(t["off"].get<int>() + t["warn"].get<int>() + t["danger"].get<int>(), t["total"].get<int>());
}

TEST(MessageLog, JsonlRoundTripAndErrors) {
  MessageLog log{{Instant{0}, "sensors/1/nox", "87.3", LogOrigin::kClient},
                 {Instant{5}, "faulted/sensors/1/nox", "a \"quoted\"\nline", LogOrigin::kInjected},
                 {Instant{9}, "alarm/BL", "2", LogOrigin::kFlow}};
  auto text = to_jsonl(log);
  EXPECT_EQ(lines(text), 3u);
  EXPECT_EQ(parse_jsonl(text), log);
  EXPECT_EQ(parse_jsonl(text + "\n\n"), log);
  EXPECT_THROW(parse_jsonl("{not json}\n"), std::exception);
  EXPECT_THROW(parse_jsonl(R"({"instantMs":0,"topic":"t","payload":"p","origin":"elsewhere"})"),
               std::exception);
}

TEST(MessageLog, SignalFromLog) {
  MessageLog log{{Instant{100}, "alarm/BL", "1", LogOrigin::kFlow},
                 {Instant{200}, "alarm/SH", "2", LogOrigin::kFlow},
                 {Instant{300}, "alarm/BL", "x", LogOrigin::kFlow},
                 {Instant{400}, "alarm/BL", "0", LogOrigin::kFlow}};
  auto s = signal_from_log(log, "alarm/BL", Duration{1000});
  EXPECT_EQ(s.level_at(Instant{150}), heal::AlarmLevel::kWarn);
  EXPECT_EQ(s.level_at(Instant{350}), heal::AlarmLevel::kWarn);
  EXPECT_EQ(s.level_at(Instant{400}), heal::AlarmLevel::kOff);
  EXPECT_EQ(alarm_topics(log), (std::vector<std::string>{"alarm/BL", "alarm/SH"}));
}

}  // namespace
}  // namespace faultwire::harness
