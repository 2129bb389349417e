#pragma once

#include "gex/dsl/ast.hpp"

#include <string>

namespace gex::dsl {

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Add:
    case Expr::Op::Sub: return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div: return 2;
    case Expr::Op::Neg: return 3;
    case Expr::Op::Pow: return 4;
    default: return 5;
  }
}

inline const char* op_text(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add: return " + ";
    case Expr::Op::Sub: return " - ";
    case Expr::Op::Mul: return " * ";
    case Expr::Op::Div: return " / ";
    case Expr::Op::Pow: return "^";
    default: return "";
  }
}

inline void emit(const Expr& e, std::string& out);

inline void emit_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  emit(e, out);
  if (wrap) out += ')';
}

inline void emit(const Expr& e, std::string& out) {
  switch (e.op) {
    case Expr::Op::Number:
    case Expr::Op::Ident: out += e.text; return;
    case Expr::Op::Call:
      out += e.text;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        emit(e.args[i], out);
      }
      out += ')';
      return;
    case Expr::Op::Neg:
      out += '-';
      emit_wrapped(e.args[0], precedence(e.args[0]) < 3, out);
      return;
    case Expr::Op::Pow:
      // Right operand is a unary expression; left must be a primary.
      emit_wrapped(e.args[0], precedence(e.args[0]) < 5, out);
      out += '^';
      emit_wrapped(e.args[1], precedence(e.args[1]) < 3, out);
      return;
    default: {
      int p = precedence(e);
      emit_wrapped(e.args[0], precedence(e.args[0]) < p, out);
      out += op_text(e.op);
      emit_wrapped(e.args[1], precedence(e.args[1]) <= p, out);
      return;
    }
  }
}

}  // namespace detail

inline std::string format(const Expr& e) {
  std::string out;
  detail::emit(e, out);
  return out;
}

inline std::string format(const Equation& eq) {
  std::string out = format(eq.lhs) + " = ";
  for (std::size_t i = 0; i < eq.rhs.size(); ++i) {
    if (i) out += " : ";
    out += format(eq.rhs[i]);
  }
  return out;
}

inline std::string format(const Statement& st) {
  if (auto* a = std::get_if<Assignment>(&st)) return a->name + " = " + format(a->value) + ";";
  const auto& as = std::get<Assertion>(st);
  std::string out = "assert " + format(as.lhs);
  if (as.rhs) out += " = " + format(*as.rhs);
  return out + ";";
}

/// Canonical text: one statement per line, single spaces around binary
/// operators, minimal parentheses.
inline std::string format(const Script& s) {
  std::string out = "triangle " + s.vertices[0] + s.vertices[1] + s.vertices[2] + ";\n";
  for (const auto& c : s.constraints) out += "constrain " + format(c) + ";\n";
  for (const auto& st : s.body) out += format(st) + "\n";
  return out;
}

}  // namespace gex::dsl
