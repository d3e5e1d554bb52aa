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

#include "faultwire/fault/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

namespace faultwire::fault {

struct MapExpr::Node {
  enum class Kind { kNumber, kValue, kNeg, kAdd, kSub, kMul, kDiv, kRandom, kMin, kMax, kClamp };
  Kind kind = Kind::kNumber;
  double number = 0;
  std::vector<std::unique_ptr<Node>> args;
};

namespace {

using Node = MapExpr::Node;
using Kind = Node::Kind;

std::unique_ptr<Node> make(Kind kind, std::vector<std::unique_ptr<Node>> args = {}) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<Node> parse_all() {
    auto root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

  int random_calls() const { return random_calls_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExprError("expression '" + std::string(text_) + "' at " + std::to_string(pos_) + ": " +
                    what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = binary(Kind::kAdd, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = binary(Kind::kSub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = binary(Kind::kMul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = binary(Kind::kDiv, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> unary() {
    if (accept('-')) {
      std::vector<std::unique_ptr<Node>> args;
      args.push_back(unary());
      return make(Kind::kNeg, std::move(args));
    }
    return primary();
  }

  std::unique_ptr<Node> primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (accept('(')) {
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::unique_ptr<Node> number() {
    auto start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    auto lit = text_.substr(start, pos_ - start);
    double v = 0;
    auto [ptr, ec] = std::from_chars(lit.data(), lit.data() + lit.size(), v);
    if (ec != std::errc{} || ptr != lit.data() + lit.size()) {
      pos_ = start;
      fail("malformed number");
    }
    auto n = make(Kind::kNumber);
    n->number = v;
    return n;
  }

  std::unique_ptr<Node> identifier() {
    auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    auto name = text_.substr(start, pos_ - start);
    if (name == "value") return make(Kind::kValue);

    Kind kind;
    std::size_t arity = 2;
    if (name == "random") {
      kind = Kind::kRandom;
      ++random_calls_;
    } else if (name == "min") {
      kind = Kind::kMin;
    } else if (name == "max") {
      kind = Kind::kMax;
    } else if (name == "clamp") {
      kind = Kind::kClamp;
      arity = 3;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    std::vector<std::unique_ptr<Node>> args;
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (args.size() != arity) {
      fail(std::string(name) + " takes " + std::to_string(arity) + " arguments");
    }
    return make(kind, std::move(args));
  }

  static std::unique_ptr<Node> binary(Kind k, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
    std::vector<std::unique_ptr<Node>> args;
    args.push_back(std::move(a));
    args.push_back(std::move(b));
    return make(k, std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int random_calls_ = 0;
};

double eval_node(const Node& n, double value, UniformSource& rng) {
  auto arg = [&](std::size_t i) { return eval_node(*n.args[i], value, rng); };
  switch (n.kind) {
    case Kind::kNumber:
      return n.number;
    case Kind::kValue:
      return value;
    case Kind::kNeg:
      return -arg(0);
    case Kind::kAdd: {
      double a = arg(0);
      return a + arg(1);
    }
    case Kind::kSub: {
      double a = arg(0);
      return a - arg(1);
    }
    case Kind::kMul: {
      double a = arg(0);
      return a * arg(1);
    }
    case Kind::kDiv: {
      double a = arg(0);
      double b = arg(1);
      if (b == 0.0) throw ExprError("division by zero");
      return a / b;
    }
    case Kind::kRandom: {
      double lo = arg(0);
      double hi = arg(1);
      return lo + rng.next_unit() * (hi - lo);
    }
    case Kind::kMin: {
      double a = arg(0);
      return std::min(a, arg(1));
    }
    case Kind::kMax: {
      double a = arg(0);
      return std::max(a, arg(1));
    }
    case Kind::kClamp: {
      double x = arg(0);
      double lo = arg(1);
      double hi = arg(2);
      return std::clamp(x, std::min(lo, hi), std::max(lo, hi));
    }
  }
  return 0;
}

}  // namespace

MapExpr MapExpr::parse(std::string_view text) {
  Parser p(text);
  std::shared_ptr<const Node> root = p.parse_all();
  return MapExpr(std::string(text), std::move(root), p.random_calls());
}

double MapExpr::eval(double value, UniformSource& rng) const { return eval_node(*root_, value, rng); }

double eval_expr(const MapExpr& e, double value, UniformSource& rng) { return e.eval(value, rng); }

}  // namespace faultwire::fault
