#pragma once

#include "gex/dsl/ast.hpp"
#include "gex/dsl/lexer.hpp"
#include "gex/dsl/signatures.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace gex::dsl {

namespace detail {

inline SourceSpan join(const SourceSpan& a, const SourceSpan& b) { return {a.line, a.column, b.end_line, b.end_column}; }

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  const std::map<std::string, unsigned, std::less<>>& kinds() const { return kinds_; }

  Script parse_script() {
    Script s;
    const Token& kw = expect(Tok::Ident, "'triangle'");
    if (kw.text != "triangle") fail(ErrorKind::SyntaxError, "script must start with 'triangle'", kw.span);
    const Token& name = expect(Tok::Ident, "three vertex letters");
    if (name.text.size() != 3) fail(ErrorKind::SyntaxError, "triangle name must be three letters", name.span);
    for (int i = 0; i < 3; ++i) {
      char ch = name.text[i];
      if (!(ch >= 'A' && ch <= 'Z')) fail(ErrorKind::SyntaxError, "vertex names must be uppercase letters", name.span);
      s.vertices[i] = std::string(1, ch);
      if (kinds_.count(s.vertices[i])) fail(ErrorKind::SyntaxError, "repeated vertex name", name.span);
      kinds_[s.vertices[i]] = kPoint;
    }
    expect(Tok::Semi, "';'");
    while (peek().kind == Tok::Ident && peek().text == "constrain") {
      next();
      Equation eq = parse_equation(true);
      check_constraint(eq);
      s.constraints.push_back(std::move(eq));
      expect(Tok::Semi, "';'");
    }
    while (peek().kind != Tok::End) s.body.push_back(parse_statement());
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, unsigned, std::less<>> kinds_;

  [[noreturn]] static void fail(ErrorKind k, const std::string& msg, const SourceSpan& span) {
    throw ScriptError(k, msg, span);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(ErrorKind::SyntaxError, std::string("expected ") + what + ", found " +
                                       (peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'"),
           peek().span);
    }
    return next();
  }

  /// The last statement of a script may omit its ';'.
  const Token& end_statement() {
    if (peek().kind == Tok::End) return peek();
    return expect(Tok::Semi, "';'");
  }

  Statement parse_statement() {
    const Token& head = expect(Tok::Ident, "a statement");
    if (head.text == "assert") {
      Assertion a;
      a.lhs = parse_expr();
      if (peek().kind == Tok::Assign) {
        next();
        a.rhs = parse_expr();
      }
      const Token& semi = end_statement();
      a.span = join(head.span, semi.span);
      check_assertion(a);
      return a;
    }
    expect(Tok::Assign, "'='");
    Assignment as;
    as.name = head.text;
    as.value = parse_expr();
    const Token& semi = end_statement();
    as.span = join(head.span, semi.span);
    if (is_reserved(as.name)) fail(ErrorKind::SyntaxError, "'" + as.name + "' is a reserved name", head.span);
    if (kinds_.count(as.name)) fail(ErrorKind::SyntaxError, "'" + as.name + "' is already defined", head.span);
    unsigned k = infer(as.value, kGeo | kScalar);
    kinds_[as.name] = k;
    return as;
  }

  Equation parse_equation(bool allow_ratio) {
    Equation eq;
    eq.lhs = parse_expr();
    expect(Tok::Assign, "'='");
    eq.rhs.push_back(parse_expr());
    while (allow_ratio && peek().kind == Tok::Colon) {
      next();
      eq.rhs.push_back(parse_expr());
    }
    eq.span = join(eq.lhs.span, eq.rhs.back().span);
    return eq;
  }

  // expr = term { ("+" | "-") term }
  Expr parse_expr() {
    Expr lhs = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Expr::Op op = next().kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub;
      Expr rhs = parse_term();
      SourceSpan sp = join(lhs.span, rhs.span);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs), sp);
    }
    return lhs;
  }

  // term = unary { ("*" | "/") unary }
  Expr parse_term() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Expr::Op op = next().kind == Tok::Star ? Expr::Op::Mul : Expr::Op::Div;
      Expr rhs = parse_unary();
      SourceSpan sp = join(lhs.span, rhs.span);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs), sp);
    }
    return lhs;
  }

  // unary = "-" unary | power
  Expr parse_unary() {
    if (peek().kind == Tok::Minus) {
      SourceSpan start = next().span;
      Expr e = parse_unary();
      SourceSpan sp = join(start, e.span);
      return Expr::unary(std::move(e), sp);
    }
    return parse_power();
  }

  // power = primary [ "^" unary ]
  Expr parse_power() {
    Expr base = parse_primary();
    if (peek().kind == Tok::Caret) {
      next();
      Expr ex = parse_unary();
      SourceSpan sp = join(base.span, ex.span);
      return Expr::binary(Expr::Op::Pow, std::move(base), std::move(ex), sp);
    }
    return base;
  }

  // primary = NUMBER | IDENT [ "(" [ expr { "," expr } ] ")" ] | "(" expr ")"
  Expr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return Expr::number(t.text, t.span);
    }
    if (t.kind == Tok::Ident) {
      next();
      if (peek().kind != Tok::LParen) return Expr::ident(t.text, t.span);
      next();
      std::vector<Expr> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(parse_expr());
        while (peek().kind == Tok::Comma) {
          next();
          args.push_back(parse_expr());
        }
      }
      const Token& close = expect(Tok::RParen, "')'");
      return Expr::call(t.text, std::move(args), join(t.span, close.span));
    }
    if (t.kind == Tok::LParen) {
      next();
      Expr e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    fail(ErrorKind::SyntaxError,
         std::string("expected an expression, found ") + (t.kind == Tok::End ? "end of input" : "'" + t.text + "'"),
         t.span);
  }

  // ---------------------------------------------------------------- checking

  /// Kind of an identifier in a slot accepting `expected`; 0 when unresolved.
  unsigned resolve_ident(const Expr& e, unsigned expected) const {
    if (auto it = kinds_.find(e.text); it != kinds_.end()) return it->second;
    if ((expected & kName) && cevian_center(e.text)) return kName;
    if ((expected & kSelector) && is_selector_keyword(e.text)) return kSelector;
    if (is_builtin_scalar(e.text)) return kScalar;
    if (e.text.size() == 2) {
      auto p = kinds_.find(e.text.substr(0, 1));
      auto q = kinds_.find(e.text.substr(1, 1));
      if (p != kinds_.end() && q != kinds_.end() && p->second == kPoint && q->second == kPoint && p != q)
        return kLine;
    }
    return 0;
  }

  unsigned infer(const Expr& e, unsigned expected) {
    unsigned k = infer_any(e, expected);
    if (k & kMulti) {
      fail(ErrorKind::SyntaxError, "multi-valued construction must be wrapped in select(...)", e.span);
    }
    if (!(k & expected)) {
      fail(ErrorKind::ArityError, "expected " + kind_name(expected) + ", found " + kind_name(k), e.span);
    }
    return k;
  }

  unsigned infer_any(const Expr& e, unsigned expected) {
    switch (e.op) {
      case Expr::Op::Number: return kScalar;
      case Expr::Op::Ident: {
        unsigned k = resolve_ident(e, expected);
        if (!k) fail(ErrorKind::UseBeforeDef, "'" + e.text + "' is not defined", e.span);
        return k;
      }
      case Expr::Op::Neg: infer(e.args[0], kScalar); return kScalar;
      case Expr::Op::Add:
      case Expr::Op::Sub:
      case Expr::Op::Mul:
      case Expr::Op::Div:
      case Expr::Op::Pow:
        infer(e.args[0], kScalar);
        infer(e.args[1], kScalar);
        return kScalar;
      case Expr::Op::Call: return infer_call(e);
    }
    return 0;
  }

  unsigned infer_call(const Expr& e) {
    const Signature* sig = find_signature(e.text);
    if (!sig) fail(ErrorKind::UnknownFunction, "unknown function '" + e.text + "'", e.span);
    if (e.text == "select") return infer_select(e);

    // Argument kinds are computed once against the union of all overload masks.
    std::vector<unsigned> arg_kinds;
    bool arity_ok = false;
    for (const auto& ov : sig->overloads) {
      std::size_t n = ov.params.size();
      if (e.args.size() == n || (ov.variadic && e.args.size() > n)) arity_ok = true;
    }
    if (!arity_ok) fail(ErrorKind::ArityError, arity_message(*sig, e.args.size()), e.span);
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      unsigned mask = 0;
      for (const auto& ov : sig->overloads) {
        if (ov.params.empty()) continue;
        mask |= i < ov.params.size() ? ov.params[i] : (ov.variadic ? ov.params.back() : 0);
      }
      arg_kinds.push_back(infer_any(e.args[i], mask));
      if (arg_kinds.back() & kMulti) {
        fail(ErrorKind::SyntaxError, "multi-valued construction must be wrapped in select(...)", e.args[i].span);
      }
    }
    for (const auto& ov : sig->overloads) {
      std::size_t n = ov.params.size();
      if (!(e.args.size() == n || (ov.variadic && e.args.size() > n))) continue;
      bool ok = true;
      for (std::size_t i = 0; i < e.args.size() && ok; ++i) {
        unsigned want = i < n ? ov.params[i] : ov.params.back();
        ok = (arg_kinds[i] & want) != 0;
      }
      if (ok) return ov.result;
    }
    std::string got;
    for (std::size_t i = 0; i < arg_kinds.size(); ++i) got += (i ? ", " : "") + kind_name(arg_kinds[i]);
    fail(ErrorKind::ArityError, "no form of " + e.text + " takes (" + got + ")", e.span);
  }

  unsigned infer_select(const Expr& e) {
    if (e.args.size() < 2) fail(ErrorKind::ArityError, "select takes a construction and at least one selector", e.span);
    unsigned first = infer_any(e.args[0], kMulti);
    if (!(first & kMulti)) fail(ErrorKind::ArityError, "select needs a multi-valued construction", e.args[0].span);
    for (std::size_t i = 1; i < e.args.size(); ++i) infer(e.args[i], kSelector);
    return first == kMultiPoint ? kPoint : kCircle;
  }

  static std::string arity_message(const Signature& sig, std::size_t got) {
    std::string want;
    for (const auto& ov : sig.overloads) {
      std::string n = std::to_string(ov.params.size()) + (ov.variadic ? "+" : "");
      if (want.find(n) == std::string::npos) want += (want.empty() ? "" : " or ") + n;
    }
    return sig.name + " takes " + want + " arguments, got " + std::to_string(got);
  }

  void check_assertion(const Assertion& a) {
    if (a.rhs) {
      infer(a.lhs, kScalar);
      infer(*a.rhs, kScalar);
      return;
    }
    if (a.lhs.op != Expr::Op::Call) fail(ErrorKind::SyntaxError, "assertion must be a predicate or an equation", a.lhs.span);
    infer(a.lhs, kPredicate);
  }

  // Constraint expressions range over a, b, c, s, K, pi and the vertex angles.
  void check_constraint(const Equation& eq) {
    if (eq.rhs.size() > 1) {
      if (!(eq.lhs.op == Expr::Op::Call && eq.lhs.text == "ratio")) {
        fail(ErrorKind::SyntaxError, "a ratio pin needs ratio(...) on the left", eq.lhs.span);
      }
      if (eq.lhs.args.size() != eq.rhs.size()) {
        fail(ErrorKind::ArityError, "ratio has " + std::to_string(eq.lhs.args.size()) + " terms but " +
                                        std::to_string(eq.rhs.size()) + " proportions",
             eq.span);
      }
      for (const auto& x : eq.lhs.args) check_constraint_expr(x);
    } else {
      check_constraint_expr(eq.lhs);
    }
    for (const auto& x : eq.rhs) check_constraint_expr(x);
  }

  void check_constraint_expr(const Expr& e) {
    switch (e.op) {
      case Expr::Op::Number: return;
      case Expr::Op::Ident:
        if (!is_builtin_scalar(e.text)) fail(ErrorKind::UseBeforeDef, "'" + e.text + "' is not a side quantity", e.span);
        return;
      case Expr::Op::Call: {
        if (e.text == "angle") {
          if (e.args.size() != 1) fail(ErrorKind::ArityError, "angle in a constraint takes one vertex", e.span);
          const Expr& v = e.args[0];
          if (v.op != Expr::Op::Ident || !kinds_.count(v.text) || v.text.size() != 1) {
            fail(ErrorKind::UseBeforeDef, "angle needs a vertex of the triangle", v.span);
          }
          return;
        }
        if (e.text == "sqrt" || e.text == "abs" || e.text == "deg") {
          if (e.args.size() != 1) fail(ErrorKind::ArityError, e.text + " takes 1 argument", e.span);
          check_constraint_expr(e.args[0]);
          return;
        }
        if (e.text == "ratio") fail(ErrorKind::SyntaxError, "ratio(...) must be followed by '= p : q : ...'", e.span);
        fail(ErrorKind::UnknownFunction, "'" + e.text + "' is not allowed in a constraint", e.span);
      }
      default:
        for (const auto& x : e.args) check_constraint_expr(x);
    }
  }
};

}  // namespace detail

/// Parses and type-checks a `.geo` script. Errors are ScriptErrors carrying the
/// offending source span.
inline Script parse(std::string_view text) { return detail::Parser(text).parse_script(); }

/// Kind of every name bound by a script, vertices included.
inline std::map<std::string, unsigned, std::less<>> binding_kinds(std::string_view text) {
  detail::Parser p(text);
  p.parse_script();
  return p.kinds();
}

}  // namespace gex::dsl
