#pragma once

#include "gex/dsl/ast.hpp"

#include <functional>
#include <random>

namespace gex::testing {

using namespace gex::dsl;

/// Random well-kinded scripts built directly as ASTs.
class ScriptFuzzer {
 public:
  explicit ScriptFuzzer(std::uint64_t seed) : rng_(seed) {}

  Script make() {
    Script s;
    points_ = {"A", "B", "C"};
    lines_.clear();
    scalars_.clear();
    circles_.clear();
    s.vertices = {"A", "B", "C"};
    if (coin(0.3)) {
      Equation eq;
      eq.lhs = Expr::call("ratio", {Expr::ident("a"), Expr::ident("b"), Expr::ident("c")});
      for (int i = 0; i < 3; ++i) eq.rhs.push_back(Expr::number(std::to_string(pick(2, 12))));
      s.constraints.push_back(eq);
    }
    if (coin(0.3)) {
      Equation eq;
      eq.lhs = scalar_side(2);
      eq.rhs.push_back(scalar_side(2));
      s.constraints.push_back(eq);
    }
    int n = pick(1, 10);
    for (int i = 0; i < n; ++i) {
      if (coin(0.3)) {
        s.body.push_back(assertion());
      } else {
        s.body.push_back(assignment(i));
      }
    }
    return s;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> points_, lines_, scalars_, circles_;

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  template <typename V>
  const std::string& any(const V& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  Expr number() {
    switch (pick(0, 2)) {
      case 0: return Expr::number(std::to_string(pick(0, 99)));
      case 1: return Expr::number(std::to_string(pick(0, 9)) + "." + std::to_string(pick(0, 999)));
      default: return Expr::number(std::to_string(pick(1, 9)) + "e-" + std::to_string(pick(1, 3)));
    }
  }

  Expr arith(int depth, const std::function<Expr(int)>& leaf) {
    if (depth <= 0 || coin(0.35)) return leaf(depth);
    int op = pick(0, 5);
    if (op == 5) return Expr::unary(arith(depth - 1, leaf));
    static const Expr::Op ops[] = {Expr::Op::Add, Expr::Op::Sub, Expr::Op::Mul, Expr::Op::Div, Expr::Op::Pow};
    return Expr::binary(ops[op], arith(depth - 1, leaf), arith(depth - 1, leaf));
  }

  Expr scalar_side(int depth) {
    return arith(depth, [this](int) {
      static const char* names[] = {"a", "b", "c", "s", "K"};
      if (coin(0.3)) return number();
      if (coin(0.15)) return Expr::call("angle", {Expr::ident(any(std::vector<std::string>{"A", "B", "C"}))});
      if (coin(0.1)) return Expr::call("sqrt", {Expr::ident(names[pick(0, 4)])});
      return Expr::ident(names[pick(0, 4)]);
    });
  }

  /// Nesting depth of geometric constructions, capped so expressions stay finite.
  int nest_ = 0;
  struct Nest {
    int& n;
    explicit Nest(int& x) : n(++x) {}
    ~Nest() { --n; }
  };

  Expr point() {
    Nest guard(nest_);
    if (nest_ > 3 || coin(0.5)) return Expr::ident(any(points_));
    switch (pick(0, 4)) {
      case 0: {
        static const char* centers[] = {"gergonne", "nagel", "incenter", "centroid", "orthocenter",
                                        "circumcenter", "mittenpunkt", "spieker", "symmedian"};
        return Expr::call(centers[pick(0, 8)], {point(), point(), point()});
      }
      case 1: return Expr::call("midpoint", {point(), point()});
      case 2: return Expr::call("foot", {point(), line()});
      case 3: return Expr::call("pointon", {point(), point(), number()});
      default: return Expr::call("intersect", {line(), line()});
    }
  }

  Expr line() {
    Nest guard(nest_);
    if (!lines_.empty() && coin(0.4)) return Expr::ident(any(lines_));
    if (nest_ > 3) return Expr::ident("BC");
    switch (pick(0, 3)) {
      case 0: return Expr::ident(any(std::vector<std::string>{"AB", "BC", "CA", "AC"}));
      case 1: return Expr::call("line", {point(), point()});
      case 2: return Expr::call("parallel", {point(), line()});
      default: return Expr::call("perpendicular", {point(), line()});
    }
  }

  Expr circle() {
    Nest guard(nest_);
    if (!circles_.empty() && coin(0.4)) return Expr::ident(any(circles_));
    if (nest_ > 3) return Expr::call("incircle", {Expr::ident("A"), Expr::ident("B"), Expr::ident("C")});
    switch (pick(0, 2)) {
      case 0: return Expr::call("incircle", {point(), point(), point()});
      case 1: return Expr::call("circumcircle", {point(), point(), point()});
      default: return Expr::call("select", {Expr::call("apollonius", {line(), line(), point()}), Expr::ident("smallest")});
    }
  }

  Expr scalar(int depth) {
    return arith(depth, [this](int) {
      if (coin(0.3)) return number();
      if (!scalars_.empty() && coin(0.3)) return Expr::ident(any(scalars_));
      switch (pick(0, 3)) {
        case 0: return Expr::call("dist", {point(), point()});
        case 1: return Expr::call("area", {point(), point(), point()});
        case 2: return Expr::call("radius", {circle()});
        default: return Expr::ident(any(std::vector<std::string>{"a", "b", "c", "s", "K", "pi"}));
      }
    });
  }

  Statement assignment(int i) {
    Assignment a;
    int kind = pick(0, 3);
    a.name = std::string(kind == 0 ? "P" : kind == 1 ? "L" : kind == 2 ? "W" : "x") + std::to_string(i);
    switch (kind) {
      case 0: a.value = point(); points_.push_back(a.name); break;
      case 1: a.value = line(); lines_.push_back(a.name); break;
      case 2: a.value = circle(); circles_.push_back(a.name); break;
      default: a.value = scalar(3); scalars_.push_back(a.name); break;
    }
    return a;
  }

  Statement assertion() {
    Assertion a;
    switch (pick(0, 3)) {
      case 0: a.lhs = Expr::call("colline", {point(), point(), point()}); break;
      case 1: a.lhs = Expr::call("perp", {line(), line()}); break;
      case 2: a.lhs = Expr::call("tangent", {circle(), line()}); break;
      default:
        a.lhs = scalar(2);
        a.rhs = scalar(2);
        break;
    }
    return a;
  }
};

}  // namespace gex::testing
