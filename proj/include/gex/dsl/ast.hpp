#pragma once

#include "gex/error.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gex::dsl {

struct Expr {
  enum class Op { Number, Ident, Call, Neg, Add, Sub, Mul, Div, Pow };

  Op op = Op::Number;
  /// Literal text for numbers, the name for identifiers and calls; empty otherwise.
  std::string text;
  std::vector<Expr> args;
  SourceSpan span;

  static Expr number(std::string lit, SourceSpan sp = {}) { return {Op::Number, std::move(lit), {}, sp}; }
  static Expr ident(std::string name, SourceSpan sp = {}) { return {Op::Ident, std::move(name), {}, sp}; }
  static Expr call(std::string name, std::vector<Expr> a, SourceSpan sp = {}) {
    return {Op::Call, std::move(name), std::move(a), sp};
  }
  static Expr unary(Expr e, SourceSpan sp = {}) { return {Op::Neg, {}, {std::move(e)}, sp}; }
  static Expr binary(Op op, Expr l, Expr r, SourceSpan sp = {}) { return {op, {}, {std::move(l), std::move(r)}, sp}; }

  bool is_binary() const { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow; }
};

/// Structural equality; spans are ignored.
inline bool same(const Expr& x, const Expr& y) {
  if (x.op != y.op || x.text != y.text || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!same(x.args[i], y.args[i])) return false;
  return true;
}

/// `lhs = rhs`, or the ratio form `lhs = r1 : r2 : ...` when rhs has more than one term.
struct Equation {
  Expr lhs;
  std::vector<Expr> rhs;
  SourceSpan span;
};

struct Assignment {
  std::string name;
  Expr value;
  SourceSpan span;
};

/// Either a predicate call (`colline(A, B, C)`) or an equation between scalars.
struct Assertion {
  Expr lhs;
  std::optional<Expr> rhs;
  SourceSpan span;

  bool is_equation() const { return rhs.has_value(); }
};

using Statement = std::variant<Assignment, Assertion>;

struct Script {
  std::array<std::string, 3> vertices{"A", "B", "C"};
  std::vector<Equation> constraints;
  std::vector<Statement> body;

  std::size_t assignment_count() const {
    std::size_t n = 0;
    for (const auto& s : body) n += std::holds_alternative<Assignment>(s);
    return n;
  }
  std::size_t assertion_count() const { return body.size() - assignment_count(); }
};

inline bool same(const Equation& x, const Equation& y) {
  if (!same(x.lhs, y.lhs) || x.rhs.size() != y.rhs.size()) return false;
  for (std::size_t i = 0; i < x.rhs.size(); ++i)
    if (!same(x.rhs[i], y.rhs[i])) return false;
  return true;
}

inline bool same(const Statement& x, const Statement& y) {
  if (x.index() != y.index()) return false;
  if (auto* a = std::get_if<Assignment>(&x)) {
    const auto& b = std::get<Assignment>(y);
    return a->name == b.name && same(a->value, b.value);
  }
  const auto& a = std::get<Assertion>(x);
  const auto& b = std::get<Assertion>(y);
  if (!same(a.lhs, b.lhs) || a.rhs.has_value() != b.rhs.has_value()) return false;
  return !a.rhs || same(*a.rhs, *b.rhs);
}

inline bool same(const Script& x, const Script& y) {
  if (x.vertices != y.vertices || x.constraints.size() != y.constraints.size() || x.body.size() != y.body.size())
    return false;
  for (std::size_t i = 0; i < x.constraints.size(); ++i)
    if (!same(x.constraints[i], y.constraints[i])) return false;
  for (std::size_t i = 0; i < x.body.size(); ++i)
    if (!same(x.body[i], y.body[i])) return false;
  return true;
}

}  // namespace gex::dsl
