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

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>

#include "faultwire/heal/nodes.hpp"

namespace faultwire::heal {
namespace {

constexpr double kNone = -1;

struct VoteCase {
  std::array<double, 3> values;
  double expected;  // kNone: no majority
};

// All ordered triples over {50, 60, 100, 250, 1000}, produced offline by a
// brute-force connected-components search over the agreement graph.
const VoteCase kTriples[] = {
    {{50, 50, 50}, 50.0},
    {{50, 50, 60}, 53.333333333333336},
    {{50, 50, 100}, 50.0},
    {{50, 50, 250}, 50.0},
    {{50, 50, 1000}, 50.0},
    {{50, 60, 50}, 53.333333333333336},
    {{50, 60, 60}, 56.666666666666664},
    {{50, 60, 100}, 55.0},
    {{50, 60, 250}, 55.0},
    {{50, 60, 1000}, 55.0},
    {{50, 100, 50}, 50.0},
    {{50, 100, 60}, 55.0},
    {{50, 100, 100}, 100.0},
    {{50, 100, 250}, kNone},
    {{50, 100, 1000}, kNone},
    {{50, 250, 50}, 50.0},
    {{50, 250, 60}, 55.0},
    {{50, 250, 100}, kNone},
    {{50, 250, 250}, 250.0},
    {{50, 250, 1000}, kNone},
    {{50, 1000, 50}, 50.0},
    {{50, 1000, 60}, 55.0},
    {{50, 1000, 100}, kNone},
    {{50, 1000, 250}, kNone},
    {{50, 1000, 1000}, 1000.0},
    {{60, 50, 50}, 53.333333333333336},
    {{60, 50, 60}, 56.666666666666664},
    {{60, 50, 100}, 55.0},
    {{60, 50, 250}, 55.0},
    {{60, 50, 1000}, 55.0},
    {{60, 60, 50}, 56.666666666666664},
    {{60, 60, 60}, 60.0},
    {{60, 60, 100}, 60.0},
    {{60, 60, 250}, 60.0},
    {{60, 60, 1000}, 60.0},
    {{60, 100, 50}, 55.0},
    {{60, 100, 60}, 60.0},
    {{60, 100, 100}, 100.0},
    {{60, 100, 250}, kNone},
    {{60, 100, 1000}, kNone},
    {{60, 250, 50}, 55.0},
    {{60, 250, 60}, 60.0},
    {{60, 250, 100}, kNone},
    {{60, 250, 250}, 250.0},
    {{60, 250, 1000}, kNone},
    {{60, 1000, 50}, 55.0},
    {{60, 1000, 60}, 60.0},
    {{60, 1000, 100}, kNone},
    {{60, 1000, 250}, kNone},
    {{60, 1000, 1000}, 1000.0},
    {{100, 50, 50}, 50.0},
    {{100, 50, 60}, 55.0},
    {{100, 50, 100}, 100.0},
    {{100, 50, 250}, kNone},
    {{100, 50, 1000}, kNone},
    {{100, 60, 50}, 55.0},
    {{100, 60, 60}, 60.0},
    {{100, 60, 100}, 100.0},
    {{100, 60, 250}, kNone},
    {{100, 60, 1000}, kNone},
    {{100, 100, 50}, 100.0},
    {{100, 100, 60}, 100.0},
    {{100, 100, 100}, 100.0},
    {{100, 100, 250}, 100.0},
    {{100, 100, 1000}, 100.0},
    {{100, 250, 50}, kNone},
    {{100, 250, 60}, kNone},
    {{100, 250, 100}, 100.0},
    {{100, 250, 250}, 250.0},
    {{100, 250, 1000}, kNone},
    {{100, 1000, 50}, kNone},
    {{100, 1000, 60}, kNone},
    {{100, 1000, 100}, 100.0},
    {{100, 1000, 250}, kNone},
    {{100, 1000, 1000}, 1000.0},
    {{250, 50, 50}, 50.0},
    {{250, 50, 60}, 55.0},
    {{250, 50, 100}, kNone},
    {{250, 50, 250}, 250.0},
    {{250, 50, 1000}, kNone},
    {{250, 60, 50}, 55.0},
    {{250, 60, 60}, 60.0},
    {{250, 60, 100}, kNone},
    {{250, 60, 250}, 250.0},
    {{250, 60, 1000}, kNone},
    {{250, 100, 50}, kNone},
    {{250, 100, 60}, kNone},
    {{250, 100, 100}, 100.0},
    {{250, 100, 250}, 250.0},
    {{250, 100, 1000}, kNone},
    {{250, 250, 50}, 250.0},
    {{250, 250, 60}, 250.0},
    {{250, 250, 100}, 250.0},
    {{250, 250, 250}, 250.0},
    {{250, 250, 1000}, 250.0},
    {{250, 1000, 50}, kNone},
    {{250, 1000, 60}, kNone},
    {{250, 1000, 100}, kNone},
    {{250, 1000, 250}, 250.0},
    {{250, 1000, 1000}, 1000.0},
    {{1000, 50, 50}, 50.0},
    {{1000, 50, 60}, 55.0},
    {{1000, 50, 100}, kNone},
    {{1000, 50, 250}, kNone},
    {{1000, 50, 1000}, 1000.0},
    {{1000, 60, 50}, 55.0},
    {{1000, 60, 60}, 60.0},
    {{1000, 60, 100}, kNone},
    {{1000, 60, 250}, kNone},
    {{1000, 60, 1000}, 1000.0},
    {{1000, 100, 50}, kNone},
    {{1000, 100, 60}, kNone},
    {{1000, 100, 100}, 100.0},
    {{1000, 100, 250}, kNone},
    {{1000, 100, 1000}, 1000.0},
    {{1000, 250, 50}, kNone},
    {{1000, 250, 60}, kNone},
    {{1000, 250, 100}, kNone},
    {{1000, 250, 250}, 250.0},
    {{1000, 250, 1000}, 1000.0},
    {{1000, 1000, 50}, 1000.0},
    {{1000, 1000, 60}, 1000.0},
    {{1000, 1000, 100}, 1000.0},
    {{1000, 1000, 250}, 1000.0},
    {{1000, 1000, 1000}, 1000.0},
};

TEST(MajorityVoteOracle, AllTriples) {
  std::size_t n = 0;
  for (const auto& c : kTriples) {
    auto got = majority_vote(c.values);
    if (c.expected == kNone) {
      EXPECT_FALSE(got.has_value()) << c.values[0] << "," << c.values[1] << "," << c.values[2];
    } else {
      ASSERT_TRUE(got.has_value()) << c.values[0] << "," << c.values[1] << "," << c.values[2];
      EXPECT_DOUBLE_EQ(*got, c.expected);
    }
    ++n;
  }
  EXPECT_EQ(n, 125u);
}

// Depth-first search over the pairwise agreement graph.
std::optional<double> brute_force_vote(const std::vector<double>& v, std::size_t min_consensus,
                                       double margin) {
  const std::size_t n = v.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    std::vector<std::size_t> stack{s};
    std::vector<std::size_t> members;
    comp[s] = static_cast<int>(comps.size());
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      members.push_back(x);
      for (std::size_t y = 0; y < n; ++y) {
        bool agree = std::abs(v[x] - v[y]) <= margin * std::max(std::abs(v[x]), std::abs(v[y]));
        if (agree && comp[y] == -1) {
          comp[y] = static_cast<int>(comps.size());
          stack.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    comps.push_back(members);
  }
  const std::vector<std::size_t>* best = nullptr;
  for (const auto& c : comps) {
    if (best == nullptr || c.size() > best->size()) best = &c;
  }
  if (best == nullptr || best->size() < min_consensus) return std::nullopt;
  double sum = 0;
  for (auto i : *best) sum += v[i];
  return sum / static_cast<double>(best->size());
}

TEST(MajorityVoteOracle, RandomListsAgreeWithBruteForce) {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 3000; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 7)(gen);
    std::vector<double> v(n);
    for (auto& x : v) x = std::uniform_int_distribution<int>(1, 40)(gen) * 25.0;
    std::size_t minc = std::uniform_int_distribution<std::size_t>(1, 3)(gen);
    double margin = std::uniform_int_distribution<int>(0, 4)(gen) * 0.1;
    auto a = majority_vote(v, minc, margin);
    auto b = brute_force_vote(v, minc, margin);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      ASSERT_DOUBLE_EQ(*a, *b);
    }
  }
}

TEST(MajorityVoteProperty, ScaleCoherence) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> v(3);
    for (auto& x : v) x = std::uniform_real_distribution<double>(5, 1000)(gen);
    // Powers of two keep the scaling exact.
    double k = std::ldexp(1.0, std::uniform_int_distribution<int>(-4, 6)(gen));
    std::vector<double> scaled = v;
    for (auto& x : scaled) x *= k;
    auto a = majority_vote(v);
    auto b = majority_vote(scaled);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_DOUBLE_EQ(*a * k, *b);
    }
  }
}

TEST(MajorityVoteProperty, SingleOutlierIsOutvoted) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 2000; ++trial) {
    double v = std::uniform_real_distribution<double>(5, 1000)(gen);
    double outlier = v * std::uniform_real_distribution<double>(2, 50)(gen);
    for (const auto& values : {std::vector<double>{v, v, outlier}, std::vector<double>{outlier, v, v},
                               std::vector<double>{v, outlier, v}}) {
      auto got = majority_vote(values);
      ASSERT_TRUE(got.has_value());
      EXPECT_DOUBLE_EQ(*got, v);
    }
  }
}

TEST(MajorityVote, Examples) {
  EXPECT_DOUBLE_EQ(*majority_vote(std::vector<double>{100, 102, 1000}), 101);
  EXPECT_DOUBLE_EQ(*majority_vote(std::vector<double>{100, 100, 100}), 100);
  EXPECT_FALSE(majority_vote(std::vector<double>{100, 300, 900}).has_value());
  EXPECT_FALSE(majority_vote(std::vector<double>{}).has_value());
  // Equal-size clusters: the one holding the earliest value wins.
  EXPECT_DOUBLE_EQ(*majority_vote(std::vector<double>{500, 100, 500, 100}), 500);
  EXPECT_DOUBLE_EQ(*majority_vote(std::vector<double>{100, 500, 500, 100}), 100);
}

}  // namespace
}  // namespace faultwire::heal
