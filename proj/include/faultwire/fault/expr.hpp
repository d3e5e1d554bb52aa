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

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "faultwire/fault/rng.hpp"

namespace faultwire::fault {

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic transform applied by the map operator.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | primary
///   primary := NUMBER | 'value' | call | '(' expr ')'
///   call    := ('random' | 'min' | 'max') '(' expr ',' expr ')'
///            | 'clamp' '(' expr ',' expr ',' expr ')'
///
/// `value` is the numeric payload. `random(lo, hi)` is a uniform draw from the
/// owning rule's stream; arguments are evaluated left to right before the draw.
class MapExpr {
 public:
  /// Throws ExprError with the offending position on malformed input.
  static MapExpr parse(std::string_view text);

  /// Throws ExprError on division by zero.
  double eval(double value, UniformSource& rng) const;

  const std::string& source() const { return source_; }
  /// Number of random() occurrences; each evaluation consumes this many draws.
  int random_calls() const { return random_calls_; }

  struct Node;

 private:
  MapExpr(std::string source, std::shared_ptr<const Node> root, int random_calls)
      : source_(std::move(source)), root_(std::move(root)), random_calls_(random_calls) {}

  std::string source_;
  std::shared_ptr<const Node> root_;
  int random_calls_ = 0;
};

double eval_expr(const MapExpr& e, double value, UniformSource& rng);

}  // namespace faultwire::fault
