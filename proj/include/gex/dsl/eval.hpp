#pragma once

#include "gex/apollonius.hpp"
#include "gex/dsl/constraints.hpp"
#include "gex/dsl/format.hpp"
#include "gex/dsl/signatures.hpp"
#include "gex/triangle.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gex::dsl {

template <typename T>
using Value = std::variant<Point<T>, Line<T>, Circle<T>, T>;

template <typename T>
struct AssertionResult {
  std::string text;
  SourceSpan span;
  T residual{};
  bool holds = false;
};

/// Bindings produced by evaluating one script on one concrete triangle.
template <typename T>
struct Env {
  Triangle<T> triangle;
  Tolerance<T> tol;
  std::array<std::string, 3> vertices;
  /// Bindings in definition order; vertices first.
  std::vector<std::pair<std::string, Value<T>>> bindings;
  std::vector<AssertionResult<T>> assertions;

  Env(Triangle<T> t, const TolerancePolicy& policy, std::array<std::string, 3> names)
      : triangle(std::move(t)), tol(triangle.tolerance(policy)), vertices(std::move(names)) {
    for (int i = 0; i < 3; ++i) bind(vertices[i], triangle.vertex(static_cast<Vertex>(i)));
  }

  const Value<T>* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &bindings[it->second].second;
  }

  void bind(const std::string& name, Value<T> v) {
    if (index_.count(name)) throw GeometryError(ErrorKind::EvalError, "'" + name + "' is already bound");
    index_[name] = bindings.size();
    bindings.emplace_back(name, std::move(v));
  }

  bool all_hold() const {
    for (const auto& a : assertions)
      if (!a.holds) return false;
    return true;
  }

 private:
  std::map<std::string, std::size_t> index_;
};

namespace detail {

template <typename T>
using Result = std::variant<Point<T>, Line<T>, Circle<T>, T, std::vector<Point<T>>, std::vector<Circle<T>>>;

template <typename T>
class Evaluator {
 public:
  explicit Evaluator(Env<T>& env) : env_(env) {}

  Result<T> eval(const Expr& e) {
    switch (e.op) {
      case Expr::Op::Number: return parse_real<T>(e.text);
      case Expr::Op::Ident: return ident(e);
      case Expr::Op::Neg: return T(-scalar(e.args[0]));
      case Expr::Op::Add: return T(scalar(e.args[0]) + scalar(e.args[1]));
      case Expr::Op::Sub: return T(scalar(e.args[0]) - scalar(e.args[1]));
      case Expr::Op::Mul: return T(scalar(e.args[0]) * scalar(e.args[1]));
      case Expr::Op::Div: {
        T d = scalar(e.args[1]);
        if (d == T(0)) throw GeometryError(ErrorKind::DegenerateInput, "division by zero");
        return T(scalar(e.args[0]) / d);
      }
      case Expr::Op::Pow: return power(e);
      case Expr::Op::Call: return call(e);
    }
    throw GeometryError(ErrorKind::EvalError, "bad expression");
  }

  T scalar(const Expr& e) { return std::get<T>(eval(e)); }
  Point<T> point(const Expr& e) { return std::get<Point<T>>(eval(e)); }
  Line<T> line(const Expr& e) { return std::get<Line<T>>(eval(e)); }
  Circle<T> circle(const Expr& e) { return std::get<Circle<T>>(eval(e)); }

  /// Residual of a predicate call, dimensionless.
  T predicate(const Expr& e) {
    const auto& tol = env_.tol;
    const auto& n = e.text;
    if (n == "colline") return residual::collinear(point(e.args[0]), point(e.args[1]), point(e.args[2]), tol);
    if (n == "concur") return residual::concurrent(line(e.args[0]), line(e.args[1]), line(e.args[2]), tol);
    if (n == "perp") return residual::perpendicular(line(e.args[0]), line(e.args[1]));
    if (n == "isparallel") return residual::parallel(line(e.args[0]), line(e.args[1]));
    if (n == "coincide") return residual::coincide(point(e.args[0]), point(e.args[1]), tol);
    if (n == "congruent") {
      using std::abs;
      return abs(circle(e.args[0]).radius - circle(e.args[1]).radius) / tol.scale;
    }
    Result<T> x = eval(e.args[0]), y = eval(e.args[1]);
    if (n == "on") {
      Point<T> p = std::get<Point<T>>(x);
      if (auto* l = std::get_if<Line<T>>(&y)) return residual::on_line(p, *l, tol);
      return residual::on_circle(p, std::get<Circle<T>>(y), tol);
    }
    if (n == "tangent") {
      if (auto* l = std::get_if<Line<T>>(&x)) return residual::tangent(std::get<Circle<T>>(y), *l, tol);
      const Circle<T>& c = std::get<Circle<T>>(x);
      if (auto* l = std::get_if<Line<T>>(&y)) return residual::tangent(c, *l, tol);
      return residual::tangent(c, std::get<Circle<T>>(y), tol);
    }
    throw GeometryError(ErrorKind::EvalError, "unknown predicate " + n);
  }

 private:
  Env<T>& env_;

  static Result<T> lift(const Value<T>& v) {
    return std::visit([](const auto& x) -> Result<T> { return x; }, v);
  }

  Result<T> ident(const Expr& e) {
    if (const Value<T>* v = env_.find(e.text)) return lift(*v);
    const auto& tri = env_.triangle;
    if (e.text == "a") return tri.a();
    if (e.text == "b") return tri.b();
    if (e.text == "c") return tri.c();
    if (e.text == "s") return tri.s();
    if (e.text == "K") return tri.area();
    if (e.text == "pi") return pi<T>();
    if (e.text.size() == 2) {
      const Value<T>* p = env_.find(e.text.substr(0, 1));
      const Value<T>* q = env_.find(e.text.substr(1, 1));
      if (p && q) return line_through(std::get<Point<T>>(*p), std::get<Point<T>>(*q), env_.tol);
    }
    throw GeometryError(ErrorKind::EvalError, "'" + e.text + "' is not defined");
  }

  Result<T> power(const Expr& e) {
    using std::pow;
    T base = scalar(e.args[0]);
    const Expr& ex = e.args[1];
    if (ex.op == Expr::Op::Number && ex.text.find_first_not_of("0123456789") == std::string::npos) {
      T r(1);
      for (int k = std::stoi(ex.text); k > 0; --k) r *= base;
      return r;
    }
    return T(pow(base, scalar(ex)));
  }

  Triangle<T> tri(const Expr& e, std::size_t first = 0) {
    return Triangle<T>(point(e.args[first]), point(e.args[first + 1]), point(e.args[first + 2]));
  }

  Result<T> call(const Expr& e) {
    using std::abs;
    using std::sqrt;
    const std::string& n = e.text;
    const auto& tol = env_.tol;
    if (auto k = center_from_name(n); k && e.args.size() == 3) return center(*k, tri(e));
    if (n == "excenter") return excenter(tri(e), Vertex::A);
    if (n == "midpoint") return midpoint(point(e.args[0]), point(e.args[1]));
    if (n == "foot") return foot(point(e.args[0]), line(e.args[1]));
    if (n == "reflect") return reflect(point(e.args[0]), line(e.args[1]));
    if (n == "center") return circle(e.args[0]).center;
    if (n == "touch") {
      if (e.args.size() == 1) return touch_point(incircle(env_.triangle), line(e.args[0]));
      Circle<T> c = circle(e.args[0]);
      Result<T> other = eval(e.args[1]);
      if (auto* l = std::get_if<Line<T>>(&other)) return touch_point(c, *l);
      return touch_point(c, std::get<Circle<T>>(other), tol);
    }
    if (n == "pointon") {
      Point<T> p = point(e.args[0]), q = point(e.args[1]);
      return p + scalar(e.args[2]) * (q - p);
    }
    if (n == "cevian") {
      auto k = cevian_center(e.args[3].text);
      return cevian(tri(e), Vertex::A, CevianKind::ThroughCenter, *k).to;
    }
    if (n == "intersect") {
      Result<T> x = eval(e.args[0]), y = eval(e.args[1]);
      auto* lx = std::get_if<Line<T>>(&x);
      auto* ly = std::get_if<Line<T>>(&y);
      if (lx && ly) return intersect_ll(*lx, *ly, tol);
      if (lx) return intersect_lc(*lx, std::get<Circle<T>>(y), tol);
      if (ly) return intersect_lc(*ly, std::get<Circle<T>>(x), tol);
      return intersect_cc(std::get<Circle<T>>(x), std::get<Circle<T>>(y), tol);
    }
    if (n == "line") return line_through(point(e.args[0]), point(e.args[1]), tol);
    if (n == "parallel") return parallel_through(point(e.args[0]), line(e.args[1]));
    if (n == "perpendicular") return perpendicular_through(point(e.args[0]), line(e.args[1]));
    if (n == "perpbisector") {
      Point<T> p = point(e.args[0]), q = point(e.args[1]);
      return perpendicular_through(midpoint(p, q), line_through(p, q, tol));
    }
    if (n == "incircle") return incircle(tri(e));
    if (n == "circumcircle" || n == "circle3") return circumcircle(tri(e));
    if (n == "ninepointcircle") return nine_point_circle(tri(e));
    if (n == "excircle") return excircle(tri(e), Vertex::A);
    if (n == "mixtilinear") return mixtilinear_incircle(tri(e), Vertex::A).circle;
    if (n == "circle") {
      Point<T> o = point(e.args[0]);
      Result<T> r = eval(e.args[1]);
      T rad = std::holds_alternative<T>(r) ? std::get<T>(r) : dist(o, std::get<Point<T>>(r));
      if (!(rad > tol.length())) throw GeometryError(ErrorKind::DegenerateInput, "circle radius must be positive");
      return Circle<T>{o, rad};
    }
    if (n == "apollonius") {
      TangencyProblem<T> p;
      for (int i = 0; i < 3; ++i) {
        Result<T> r = eval(e.args[i]);
        if (auto* pt = std::get_if<Point<T>>(&r)) p.constraints[i] = *pt;
        else if (auto* l = std::get_if<Line<T>>(&r)) p.constraints[i] = *l;
        else p.constraints[i] = std::get<Circle<T>>(r);
      }
      std::vector<Circle<T>> out;
      for (const auto& s : solve(p, tol)) out.push_back(s.circle);
      return out;
    }
    if (n == "dist") return dist(point(e.args[0]), point(e.args[1]));
    if (n == "angle") return angle(point(e.args[0]), point(e.args[1]), point(e.args[2]), tol);
    if (n == "area") {
      std::vector<Point<T>> pts;
      for (const auto& a : e.args) pts.push_back(point(a));
      return polygon_area(pts);
    }
    if (n == "sarea") return signed_area(point(e.args[0]), point(e.args[1]), point(e.args[2]));
    if (n == "radius") return circle(e.args[0]).radius;
    if (n == "inradius") return incircle(tri(e)).radius;
    if (n == "circumradius") return circumcircle(tri(e)).radius;
    if (n == "sqrt") {
      T x = scalar(e.args[0]);
      if (x < T(0)) throw GeometryError(ErrorKind::DegenerateInput, "square root of a negative number");
      return T(sqrt(x));
    }
    if (n == "abs") return T(abs(scalar(e.args[0])));
    if (n == "deg") return degrees(scalar(e.args[0]));
    if (n == "select") return select_call(e);
    throw GeometryError(ErrorKind::EvalError, "'" + n + "' cannot be evaluated here");
  }

  template <typename Item>
  static Point<T> position(const Item& x) {
    if constexpr (std::is_same_v<Item, Circle<T>>) {
      return x.center;
    } else {
      return x;
    }
  }

  template <typename Item>
  Result<T> pick(std::vector<Item> items, const Expr& e) {
    using std::abs;
    const auto& tol = env_.tol;
    const Expr* ranker = nullptr;
    for (std::size_t i = 1; i < e.args.size(); ++i) {
      const Expr& s = e.args[i];
      if (s.op == Expr::Op::Ident || s.text == "near" || s.text == "far") {
        if (!ranker) ranker = &s;
        continue;
      }
      std::vector<Item> keep;
      for (const Item& it : items) {
        Point<T> pos = position(it);
        bool ok = false;
        if (s.text == "inside") {
          Point<T> p = point(s.args[0]), q = point(s.args[1]), r = point(s.args[2]);
          T s1 = signed_area(p, q, pos), s2 = signed_area(q, r, pos), s3 = signed_area(r, p, pos);
          ok = (s1 > T(0) && s2 > T(0) && s3 > T(0)) || (s1 < T(0) && s2 < T(0) && s3 < T(0));
        } else if (s.text == "other") {
          ok = dist(pos, point(s.args[0])) > tol.length();
        } else if (s.text == "internal" || s.text == "external") {
          Circle<T> c = circle(s.args[0]);
          T rad = T(0);
          if constexpr (std::is_same_v<Item, Circle<T>>) rad = it.radius;
          T d = dist(pos, c.center);
          ok = s.text == "internal" ? d + rad <= c.radius + tol.length() : d + tol.length() >= c.radius + rad;
        } else if (s.text == "sameside") {
          Line<T> l = line(s.args[0]);
          // Points within tolerance of the line belong to neither side.
          T side = l.eval(point(s.args[1]));
          T here = l.eval(pos);
          ok = (side > T(0) && here > tol.length()) || (side < T(0) && here < -tol.length());
        }
        if (ok) keep.push_back(it);
      }
      items = std::move(keep);
    }
    if (items.empty()) throw GeometryError(ErrorKind::AmbiguousSelection, "no candidate matches the selectors");
    if (!ranker) {
      if (items.size() != 1) {
        throw GeometryError(ErrorKind::AmbiguousSelection,
                            std::to_string(items.size()) + " candidates match the selectors");
      }
      return items.front();
    }
    const std::string& r = ranker->text;
    if (r == "first") return items.front();
    if (r == "last") return items.back();
    auto key = [&](const Item& it) -> T {
      if (r == "smallest" || r == "largest") {
        if constexpr (std::is_same_v<Item, Circle<T>>) {
          return r == "smallest" ? it.radius : -it.radius;
        } else {
          throw GeometryError(ErrorKind::EvalError, "smallest/largest apply to circles");
        }
      }
      T d = dist(position(it), point(ranker->args[0]));
      return r == "near" ? d : -d;
    };
    std::size_t best = 0;
    T best_key = key(items[0]);
    for (std::size_t i = 1; i < items.size(); ++i) {
      T k = key(items[i]);
      if (k < best_key) {
        best = i;
        best_key = k;
      }
    }
    return items[best];
  }

  Result<T> select_call(const Expr& e) {
    Result<T> multi = eval(e.args[0]);
    if (auto* pts = std::get_if<std::vector<Point<T>>>(&multi)) return pick(*pts, e);
    return pick(std::get<std::vector<Circle<T>>>(multi), e);
  }
};

template <typename T>
T equation_residual(const T& x, const T& y) {
  using std::abs;
  T m = abs(x) > abs(y) ? abs(x) : abs(y);
  return m > T(0) ? abs(x - y) / m : T(0);
}

template <typename T>
Value<T> to_value(Result<T> r) {
  return std::visit(
      [](auto&& x) -> Value<T> {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, std::vector<Point<T>>> || std::is_same_v<X, std::vector<Circle<T>>>) {
          throw GeometryError(ErrorKind::EvalError, "multi-valued result without select");
        } else {
          return x;
        }
      },
      std::move(r));
}

template <typename T>
void check_finite(const Value<T>& v) {
  bool ok = std::visit(
      [](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Point<T>>) return is_finite(x.x) && is_finite(x.y);
        else if constexpr (std::is_same_v<X, Line<T>>) return is_finite(x.a) && is_finite(x.b) && is_finite(x.c);
        else if constexpr (std::is_same_v<X, Circle<T>>) return is_finite(x.center.x) && is_finite(x.center.y) && is_finite(x.radius);
        else return is_finite(x);
      },
      v);
  if (!ok) throw GeometryError(ErrorKind::DegenerateInput, "construction produced a non-finite value");
}

}  // namespace detail

/// Evaluates one statement into an existing environment. Kernel failures are
/// rethrown as EvalError carrying the statement's span.
template <typename T>
void evaluate_statement(const Statement& st, Env<T>& env) {
  detail::Evaluator<T> ev(env);
  SourceSpan span = std::visit([](const auto& s) { return s.span; }, st);
  try {
    if (auto* a = std::get_if<Assignment>(&st)) {
      Value<T> v = detail::to_value<T>(ev.eval(a->value));
      detail::check_finite(v);
      env.bind(a->name, std::move(v));
      return;
    }
    const auto& as = std::get<Assertion>(st);
    AssertionResult<T> r;
    r.text = format(st);
    r.span = as.span;
    if (as.rhs) r.residual = detail::equation_residual(ev.scalar(as.lhs), ev.scalar(*as.rhs));
    else r.residual = ev.predicate(as.lhs);
    r.holds = is_finite(r.residual) && r.residual <= T(env.tol.eps);
    env.assertions.push_back(std::move(r));
  } catch (const ScriptError&) {
    throw;
  } catch (const GeometryError& err) {
    throw ScriptError(ErrorKind::EvalError, err.what(), span);
  } catch (const std::bad_variant_access&) {
    throw ScriptError(ErrorKind::EvalError, "argument has the wrong kind", span);
  }
}

/// Checks the script's shape constraints on the triangle at the tolerance's precision.
template <typename T>
void check_constraints(const Script& s, const Triangle<T>& t, double eps) {
  ConstraintSet cs = constraint_set(s);
  if (cs.empty()) return;
  formulas::SideTriple<T> st;
  st.a = t.a();
  st.b = t.b();
  st.c = t.c();
  auto res = constraint_residuals(cs, st);
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!(res[i] <= T(eps))) {
      throw ScriptError(ErrorKind::ConstraintViolation,
                        "triangle violates constraint " + format(cs.equations[i].first) + " = " +
                            format(cs.equations[i].second),
                        s.constraints.empty() ? SourceSpan{} : s.constraints.front().span);
    }
  }
}

/// Evaluates every statement in order. False assertions are recorded, never thrown.
template <typename T>
Env<T> evaluate(const Script& s, const Triangle<T>& t, const TolerancePolicy& policy = {}) {
  check_constraints(s, t, policy.eps_detect);
  Env<T> env(t, policy, s.vertices);
  for (const auto& st : s.body) evaluate_statement(st, env);
  return env;
}

}  // namespace gex::dsl
