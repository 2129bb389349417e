#pragma once

#include "gex/dsl/ast.hpp"
#include "gex/dsl/format.hpp"
#include "gex/dsl/parser.hpp"
#include "gex/formulas.hpp"

#include <string>
#include <vector>

namespace gex::dsl {

/// Shape constraints of a script, with ratio pins expanded to pairwise equations.
struct ConstraintSet {
  std::array<std::string, 3> vertices{"A", "B", "C"};
  /// Each entry reads lhs = rhs.
  std::vector<std::pair<Expr, Expr>> equations;
  /// Source text of the original constraints, joined by "; ".
  std::string text;

  bool empty() const { return equations.empty(); }
};

inline ConstraintSet constraint_set(const Script& s) {
  ConstraintSet cs;
  cs.vertices = s.vertices;
  for (const auto& eq : s.constraints) {
    if (!cs.text.empty()) cs.text += "; ";
    cs.text += format(eq);
    if (eq.rhs.size() == 1) {
      cs.equations.emplace_back(eq.lhs, eq.rhs[0]);
      continue;
    }
    // x0 : x1 : ... = r0 : r1 : ...  becomes  x_i * r0 = x0 * r_i.
    const auto& x = eq.lhs.args;
    for (std::size_t i = 1; i < x.size(); ++i) {
      cs.equations.emplace_back(Expr::binary(Expr::Op::Mul, x[i], eq.rhs[0]),
                                Expr::binary(Expr::Op::Mul, x[0], eq.rhs[i]));
    }
  }
  return cs;
}

/// Parses constraint text such as "ratio(a, b, c) = 7 : 9 : 10; angle(B) = deg(90)".
inline ConstraintSet parse_constraints(const std::string& text) {
  std::string src = "triangle ABC;\n";
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    std::string piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t\r\n") != std::string::npos) src += "constrain " + piece + ";\n";
    start = end + 1;
  }
  return constraint_set(parse(src));
}

/// Evaluates a constraint-language expression on side lengths.
template <typename T>
T eval_side_expr(const Expr& e, const formulas::SideTriple<T>& t, const std::array<std::string, 3>& vertices) {
  using std::abs;
  using std::acos;
  using std::pow;
  using std::sqrt;
  switch (e.op) {
    case Expr::Op::Number: return parse_real<T>(e.text);
    case Expr::Op::Ident:
      if (e.text == "a") return t.a;
      if (e.text == "b") return t.b;
      if (e.text == "c") return t.c;
      if (e.text == "s") return t.s();
      if (e.text == "K") return t.K();
      if (e.text == "pi") return pi<T>();
      break;
    case Expr::Op::Neg: return -eval_side_expr(e.args[0], t, vertices);
    case Expr::Op::Add: return eval_side_expr(e.args[0], t, vertices) + eval_side_expr(e.args[1], t, vertices);
    case Expr::Op::Sub: return eval_side_expr(e.args[0], t, vertices) - eval_side_expr(e.args[1], t, vertices);
    case Expr::Op::Mul: return eval_side_expr(e.args[0], t, vertices) * eval_side_expr(e.args[1], t, vertices);
    case Expr::Op::Div: return eval_side_expr(e.args[0], t, vertices) / eval_side_expr(e.args[1], t, vertices);
    case Expr::Op::Pow: {
      T base = eval_side_expr(e.args[0], t, vertices);
      const Expr& ex = e.args[1];
      if (ex.op == Expr::Op::Number && ex.text.find_first_not_of("0123456789") == std::string::npos) {
        T r(1);
        for (int k = std::stoi(ex.text); k > 0; --k) r *= base;
        return r;
      }
      return pow(base, eval_side_expr(ex, t, vertices));
    }
    case Expr::Op::Call: {
      if (e.text == "angle") {
        int v = 0;
        while (v < 3 && vertices[v] != e.args[0].text) ++v;
        if (v == 3) break;
        T opp = t.side(static_cast<Vertex>(v));
        T p = t.side(static_cast<Vertex>((v + 1) % 3));
        T q = t.side(static_cast<Vertex>((v + 2) % 3));
        T cosv = (p * p + q * q - opp * opp) / (T(2) * p * q);
        if (cosv > T(1)) cosv = T(1);
        if (cosv < T(-1)) cosv = T(-1);
        return acos(cosv);
      }
      T x = eval_side_expr(e.args[0], t, vertices);
      if (e.text == "sqrt") return sqrt(x);
      if (e.text == "abs") return abs(x);
      if (e.text == "deg") return degrees(x);
      break;
    }
  }
  throw GeometryError(ErrorKind::EvalError, "cannot evaluate '" + format(e) + "' on side lengths");
}

/// Raw residuals lhs - rhs, one per equation.
template <typename T>
std::vector<T> constraint_values(const ConstraintSet& cs, const formulas::SideTriple<T>& t) {
  std::vector<T> out;
  for (const auto& [l, r] : cs.equations) out.push_back(eval_side_expr(l, t, cs.vertices) - eval_side_expr(r, t, cs.vertices));
  return out;
}

/// Relative residuals |lhs - rhs| / max(|lhs|, |rhs|).
template <typename T>
std::vector<T> constraint_residuals(const ConstraintSet& cs, const formulas::SideTriple<T>& t) {
  using std::abs;
  std::vector<T> out;
  for (const auto& [l, r] : cs.equations) {
    T x = eval_side_expr(l, t, cs.vertices), y = eval_side_expr(r, t, cs.vertices);
    T m = abs(x) > abs(y) ? abs(x) : abs(y);
    out.push_back(m > T(0) ? abs(x - y) / m : T(0));
  }
  return out;
}

}  // namespace gex::dsl
