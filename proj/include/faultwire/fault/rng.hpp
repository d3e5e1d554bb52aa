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

#include <cstdint>
#include <random>

namespace faultwire::fault {

/// Source of uniform draws in [0, 1). Abstract so expression evaluation can be
/// tested against fixed draws.
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  virtual double next_unit() = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream seed for rule `rule_index` under a global experiment seed.
std::uint64_t derive_stream_seed(std::uint64_t global_seed, std::uint64_t rule_index);

/// mt19937_64 with a portable 53-bit mapping to doubles; the standard
/// distributions are avoided because their output differs between standard
/// library implementations.
class SeededRng final : public UniformSource {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  double next_unit() override;
  double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }
  /// One draw; true with probability p.
  bool chance(double p) { return next_unit() < p; }
  /// Uniform integer in [lo, hi], one draw.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
};

}  // namespace faultwire::fault
