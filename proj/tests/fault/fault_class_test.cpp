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

// One test per message-level fault class, each observed by a subscriber on a
// three-message trace through the broker.
#include <gtest/gtest.h>

#include "faultwire/core/virtual_scheduler.hpp"
#include "faultwire/fault/config.hpp"
#include "faultwire/fault/engine.hpp"
#include "faultwire/mqtt/broker.hpp"
#include "faultwire/mqtt/local_link.hpp"

namespace faultwire::fault {
namespace {

struct Delivery {
  std::string topic;
  std::string payload;
  std::int64_t at;

  bool operator==(const Delivery&) const = default;
};

std::ostream& operator<<(std::ostream& os, const Delivery& d) {
  return os << d.topic << "=" << d.payload << "@" << d.at;
}

struct Published {
  std::string topic;
  std::string payload;
  std::int64_t at;
};

class Bench {
 public:
  explicit Bench(const std::string& config)
      : engine_(loop_, parse_config(config)), broker_(loop_), sub_(loop_, broker_, "sub"),
        pub_(loop_, broker_, "pub") {
    broker_.set_interceptor(&engine_);
    sub_.client().set_message_handler([this](const Message& m) {
      got.push_back(Delivery{m.topic, m.payload, loop_.now().count()});
    });
    sub_.client().connect();
    pub_.client().connect();
    sub_.client().subscribe("#");
    loop_.run();
  }

  std::vector<Delivery> run(const std::vector<Published>& trace) {
    for (const auto& p : trace) {
      loop_.post_at(Instant{p.at}, [this, p] { pub_.client().publish(p.topic, p.payload); });
    }
    loop_.run();
    return got;
  }

  std::vector<Delivery> got;

 private:
  VirtualScheduler loop_;
  FaultEngine engine_;
  mqtt::Broker broker_;
  mqtt::LocalLink sub_;
  mqtt::LocalLink pub_;
};

const std::vector<Published> kTrace{{"x", "10", 1000}, {"x", "20", 2000}, {"x", "30", 3000}};

TEST(FaultClass, Omission) {
  Bench b(R"({"rules":[{"topic":"x","startAfter":1,"stopAfter":2,
              "operators":[{"type":"randomDrop","probability":1.0}]}]})");
  EXPECT_EQ(b.run(kTrace), (std::vector<Delivery>{{"x", "10", 1000}, {"x", "30", 3000}}));
}

TEST(FaultClass, Corruption) {
  Bench b(R"({"rules":[{"topic":"x","startAfter":1,"stopAfter":2,
              "operators":[{"type":"map","expr":"value * 2"}]}]})");
  EXPECT_EQ(b.run(kTrace),
            (std::vector<Delivery>{{"x", "10", 1000}, {"x", "40", 2000}, {"x", "30", 3000}}));
}

TEST(FaultClass, Reordering) {
  Bench b(R"({"rules":[{"topic":"x","operators":[{"type":"buffer","count":2}]}]})");
  auto got = b.run({{"x", "A", 1000}, {"y", "B", 2000}, {"x", "C", 3000}});
  EXPECT_EQ(got,
            (std::vector<Delivery>{{"y", "B", 2000}, {"x", "A", 3000}, {"x", "C", 3000}}));
  // Publish order was A, B, C.
  EXPECT_NE(got.front().payload, "A");
}

TEST(FaultClass, Duplication) {
  Bench b(R"({"rules":[{"topic":"x","operators":[{"type":"duplicate","delayMs":6000}]}]})");
  EXPECT_EQ(b.run(kTrace), (std::vector<Delivery>{{"x", "10", 1000},
                                                  {"x", "20", 2000},
                                                  {"x", "30", 3000},
                                                  {"x", "10", 7000},
                                                  {"x", "20", 8000},
                                                  {"x", "30", 9000}}));
}

TEST(FaultClass, Delay) {
  Bench b(R"({"rules":[{"topic":"x","operators":[{"type":"randomDelay","minMs":1500,"maxMs":1500}]}]})");
  EXPECT_EQ(b.run(kTrace),
            (std::vector<Delivery>{{"x", "10", 2500}, {"x", "20", 3500}, {"x", "30", 4500}}));
}

TEST(FaultClass, UnequalDelaysReorder) {
  // Two messages 10 ms apart with delays drawn from [0, 1000]: with this seed
  // the second overtakes the first.
  bool reordered = false;
  for (std::uint64_t seed = 0; seed < 20 && !reordered; ++seed) {
    Bench b(R"({"seed":)" + std::to_string(seed) +
            R"(,"rules":[{"topic":"x","operators":[{"type":"randomDelay","minMs":0,"maxMs":1000}]}]})");
    auto got = b.run({{"x", "first", 0}, {"x", "second", 10}});
    reordered = got.size() == 2 && got[0].payload == "second";
  }
  EXPECT_TRUE(reordered);
}

}  // namespace
}  // namespace faultwire::fault
