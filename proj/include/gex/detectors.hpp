#pragma once

#include "gex/dsl/eval.hpp"
#include "gex/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace gex::detect {

using dsl::Expr;

template <typename T>
using Env = dsl::Env<T>;

enum class RelationKind {
  Collinear,
  Concurrent,
  Parallel,
  Perpendicular,
  Coincident,
  Tangent,
  OnCircle,
  CongruentCircles,
  Equality,
  RationalRatio,
  LinearInteger,
  Reciprocal,
  Quadratic,
  AngleEquality,
  AngleSupplementary,
};

inline const char* to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Collinear: return "collinear";
    case RelationKind::Concurrent: return "concurrent";
    case RelationKind::Parallel: return "parallel";
    case RelationKind::Perpendicular: return "perpendicular";
    case RelationKind::Coincident: return "point-coincidence";
    case RelationKind::Tangent: return "tangency";
    case RelationKind::OnCircle: return "on-circle";
    case RelationKind::CongruentCircles: return "congruent-circles";
    case RelationKind::Equality: return "equality";
    case RelationKind::RationalRatio: return "rational-ratio";
    case RelationKind::LinearInteger: return "linear-integer";
    case RelationKind::Reciprocal: return "reciprocal";
    case RelationKind::Quadratic: return "quadratic";
    case RelationKind::AngleEquality: return "angle-equality";
    case RelationKind::AngleSupplementary: return "angle-supplementary";
  }
  return "?";
}

inline bool is_incidence(RelationKind k) {
  return k == RelationKind::Collinear || k == RelationKind::Concurrent || k == RelationKind::Parallel ||
         k == RelationKind::Perpendicular || k == RelationKind::Coincident || k == RelationKind::Tangent ||
         k == RelationKind::OnCircle || k == RelationKind::CongruentCircles;
}

/// A candidate property. Operands are DSL expressions over the figure's bindings.
struct Relation {
  RelationKind kind = RelationKind::Equality;
  std::vector<Expr> operands;
  /// RationalRatio: {p, q} with f0 = p/q f1. LinearInteger: one per operand.
  /// Quadratic: signs, +1 on the left side and -1 on the right.
  std::vector<long long> coefficients;

  Expr lhs() const { return sides().first; }

  /// The relation as a DSL assertion: a predicate call or an equation.
  dsl::Assertion assertion() const {
    dsl::Assertion a;
    auto [l, r] = sides();
    a.lhs = l;
    if (!is_incidence(kind)) a.rhs = r;
    return a;
  }

  std::string text() const { return dsl::format(dsl::Statement{assertion()}); }

 private:
  static Expr num(long long v) { return Expr::number(std::to_string(v)); }
  static Expr scaled(long long c, const Expr& e) {
    return c == 1 ? e : Expr::binary(Expr::Op::Mul, num(c), e);
  }
  static Expr sum(std::vector<Expr> terms) {
    Expr acc = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) acc = Expr::binary(Expr::Op::Add, acc, terms[i]);
    return acc;
  }
  static Expr recip(const Expr& e) { return Expr::binary(Expr::Op::Div, num(1), e); }
  static Expr square(const Expr& e) { return Expr::binary(Expr::Op::Pow, e, num(2)); }

  std::pair<Expr, Expr> sides() const {
    const auto& o = operands;
    switch (kind) {
      case RelationKind::Collinear: return {Expr::call("colline", o), {}};
      case RelationKind::Concurrent: return {Expr::call("concur", o), {}};
      case RelationKind::Parallel: return {Expr::call("isparallel", o), {}};
      case RelationKind::Perpendicular: return {Expr::call("perp", o), {}};
      case RelationKind::Coincident: return {Expr::call("coincide", o), {}};
      case RelationKind::Tangent: return {Expr::call("tangent", o), {}};
      case RelationKind::OnCircle: return {Expr::call("on", o), {}};
      case RelationKind::CongruentCircles: return {Expr::call("congruent", o), {}};
      case RelationKind::Equality:
      case RelationKind::AngleEquality: return {o[0], o[1]};
      case RelationKind::RationalRatio: return {scaled(coefficients[1], o[0]), scaled(coefficients[0], o[1])};
      case RelationKind::LinearInteger: {
        std::vector<Expr> l, r;
        for (std::size_t i = 0; i < o.size(); ++i) {
          long long c = coefficients[i];
          (c > 0 ? l : r).push_back(scaled(c > 0 ? c : -c, o[i]));
        }
        if (r.empty()) r.push_back(num(0));
        return {sum(l), sum(r)};
      }
      case RelationKind::Reciprocal: return {sum({recip(o[0]), recip(o[1])}), recip(o[2])};
      case RelationKind::Quadratic: {
        std::vector<Expr> l, r;
        for (std::size_t i = 0; i < o.size(); ++i) (coefficients[i] > 0 ? l : r).push_back(square(o[i]));
        return {sum(l), sum(r)};
      }
      case RelationKind::AngleSupplementary: return {sum({o[0], o[1]}), Expr::ident("pi")};
    }
    return {};
  }
};

struct Evidence {
  int samples = 0;
  double max_residual_fast = 0;
  double max_residual_confirm = 0;
  /// Largest residual on the generic baseline; 1 when the baseline cannot be built.
  double negative_control_residual = 1;
};

struct Finding {
  Relation relation;
  Evidence evidence;
  bool trivial = false;
};

// ------------------------------------------------------------------
// Features

/// Dimension of a scalar feature; features only combine within a class.
enum class Dim { Length = 1, Area = 2, Angle = 0, Other = -1 };

struct FeatureSpec {
  Expr expr;
  std::string name;
  Dim dim = Dim::Other;
  /// Root bindings the feature depends on.
  std::set<std::string> objects;
  bool radius = false;
  /// Indices into the plan's points (dist, area, angle) or circles (radius).
  std::array<int, 3> ref{-1, -1, -1};
};

struct ObjectSpec {
  Expr expr;
  std::string name;
  std::set<std::string> objects;
};

/// Deterministic list of feature expressions, fixed from one sample and then
/// evaluated on every sample of the same script.
struct FeaturePlan {
  std::vector<ObjectSpec> points, lines, circles;
  std::vector<FeatureSpec> scalars;
  /// Objects introduced by the newest step; empty at depth 0.
  std::set<std::string> focus;

  bool touches_focus(const std::set<std::string>& objs) const {
    if (focus.empty()) return true;
    for (const auto& o : objs)
      if (focus.count(o)) return true;
    return false;
  }
};

struct PlanOptions {
  /// Bindings allowed to appear in features; empty means all.
  std::set<std::string> allowed;
  std::set<std::string> focus;
  /// Cap per dimension class on scalar features.
  std::size_t cap = 40;
};

template <typename T>
struct FeatureSet {
  std::vector<Point<T>> points;
  std::vector<Line<T>> lines;
  std::vector<Circle<T>> circles;
  std::vector<T> scalars;
  Tolerance<T> tol;
};

namespace detail {

inline std::set<std::string> merge(std::initializer_list<const std::set<std::string>*> sets) {
  std::set<std::string> out;
  for (const auto* s : sets) out.insert(s->begin(), s->end());
  return out;
}

template <typename T>
Point<T> point_of(const Env<T>& env, const ObjectSpec& spec) {
  const std::string& root = *spec.objects.begin();
  const auto& v = *env.find(root);
  if (const auto* p = std::get_if<Point<T>>(&v)) return *p;
  return std::get<Circle<T>>(v).center;
}

}  // namespace detail

/// Builds the feature plan from one evaluated sample.
template <typename T>
FeaturePlan make_plan(const Env<T>& env, const PlanOptions& opt = {}) {
  using std::abs;
  FeaturePlan plan;
  plan.focus = opt.focus;
  auto allowed = [&](const std::string& n) { return opt.allowed.empty() || opt.allowed.count(n); };

  std::vector<Point<T>> pts;
  for (const auto& [name, v] : env.bindings) {
    if (!allowed(name)) continue;
    if (const auto* p = std::get_if<Point<T>>(&v)) {
      plan.points.push_back({Expr::ident(name), name, {name}});
      pts.push_back(*p);
    } else if (const auto* c = std::get_if<Circle<T>>(&v)) {
      plan.circles.push_back({Expr::ident(name), name, {name}});
      Expr ce = Expr::call("center", {Expr::ident(name)});
      plan.points.push_back({ce, dsl::format(ce), {name}});
      pts.push_back(c->center);
    } else if (std::holds_alternative<Line<T>>(v)) {
      plan.lines.push_back({Expr::ident(name), name, {name}});
    }
  }
  const auto& tol = env.tol;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(pts[i], pts[j]) <= tol.length()) continue;
      Expr l = Expr::call("line", {plan.points[i].expr, plan.points[j].expr});
      plan.lines.push_back({l, dsl::format(l), detail::merge({&plan.points[i].objects, &plan.points[j].objects})});
    }
  }

  // Scalar features by class, newest-step features first, then capped.
  std::vector<FeatureSpec> len, area, ang, other;
  len.push_back({Expr::ident("s"), "s", Dim::Length, {}, false, {-1, -1, -1}});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Expr e = Expr::call("dist", {plan.points[i].expr, plan.points[j].expr});
      len.push_back({e, dsl::format(e), Dim::Length, detail::merge({&plan.points[i].objects, &plan.points[j].objects}),
                     false, {int(i), int(j), -1}});
    }
  }
  for (std::size_t c = 0; c < plan.circles.size(); ++c) {
    Expr e = Expr::call("radius", {plan.circles[c].expr});
    len.push_back({e, dsl::format(e), Dim::Length, plan.circles[c].objects, true, {int(c), -1, -1}});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        auto objs = detail::merge({&plan.points[i].objects, &plan.points[j].objects, &plan.points[k].objects});
        Expr e = Expr::call("area", {plan.points[i].expr, plan.points[j].expr, plan.points[k].expr});
        area.push_back({e, dsl::format(e), Dim::Area, objs, false, {int(i), int(j), int(k)}});
        // Angles at each of the three points.
        std::size_t idx[3] = {i, j, k};
        for (int m = 0; m < 3; ++m) {
          std::size_t q = idx[m], p = idx[(m + 1) % 3], r = idx[(m + 2) % 3];
          if (p > r) std::swap(p, r);
          Expr a = Expr::call("angle", {plan.points[p].expr, plan.points[q].expr, plan.points[r].expr});
          ang.push_back({a, dsl::format(a), Dim::Angle, objs, false, {int(p), int(q), int(r)}});
        }
      }
    }
  }
  for (const auto& [name, v] : env.bindings) {
    if (allowed(name) && std::holds_alternative<T>(v)) other.push_back({Expr::ident(name), name, Dim::Other, {name}, false, {}});
  }
  for (auto* cls : {&len, &area, &ang, &other}) {
    std::stable_partition(cls->begin(), cls->end(), [&](const FeatureSpec& f) {
      return !plan.focus.empty() && plan.touches_focus(f.objects);
    });
    if (cls->size() > opt.cap) cls->resize(opt.cap);
    plan.scalars.insert(plan.scalars.end(), cls->begin(), cls->end());
  }
  return plan;
}

/// Evaluates a plan on one sample. Degenerate features come out as NaN.
template <typename T>
FeatureSet<T> extract(const FeaturePlan& plan, const Env<T>& env) {
  FeatureSet<T> fs{{}, {}, {}, {}, env.tol};
  for (const auto& p : plan.points) fs.points.push_back(detail::point_of(env, p));
  const T nan = std::numeric_limits<T>::quiet_NaN();
  for (const auto& l : plan.lines) {
    if (l.expr.op == Expr::Op::Ident) {
      fs.lines.push_back(std::get<Line<T>>(*env.find(l.name)));
      continue;
    }
    // line(P, Q): locate both points by name.
    Point<T> p{}, q{};
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
      if (dsl::same(plan.points[i].expr, l.expr.args[0])) p = fs.points[i];
      if (dsl::same(plan.points[i].expr, l.expr.args[1])) q = fs.points[i];
    }
    Point<T> d = q - p;
    T len = norm(d);
    if (!(len > env.tol.length())) {
      fs.lines.push_back({nan, nan, nan});
    } else {
      fs.lines.push_back(line_through(p, q, env.tol));
    }
  }
  for (const auto& c : plan.circles) fs.circles.push_back(std::get<Circle<T>>(*env.find(c.name)));
  const auto& P = fs.points;
  for (const auto& f : plan.scalars) {
    const auto& r = f.ref;
    if (f.radius) {
      fs.scalars.push_back(fs.circles[r[0]].radius);
    } else if (f.dim == Dim::Length && r[0] >= 0) {
      fs.scalars.push_back(dist(P[r[0]], P[r[1]]));
    } else if (f.dim == Dim::Length) {
      fs.scalars.push_back(env.triangle.s());
    } else if (f.dim == Dim::Area) {
      using std::abs;
      fs.scalars.push_back(abs(signed_area(P[r[0]], P[r[1]], P[r[2]])));
    } else if (f.dim == Dim::Angle) {
      try {
        fs.scalars.push_back(angle(P[r[0]], P[r[1]], P[r[2]], env.tol));
      } catch (const GeometryError&) {
        fs.scalars.push_back(nan);
      }
    } else {
      fs.scalars.push_back(std::get<T>(*env.find(f.name)));
    }
  }
  return fs;
}

/// Features of one evaluated figure, planned from that figure alone.
template <typename T>
std::pair<FeaturePlan, FeatureSet<T>> extract(const Env<T>& env, const PlanOptions& opt = {}) {
  FeaturePlan plan = make_plan(env, opt);
  FeatureSet<T> fs = extract(plan, env);
  return {std::move(plan), std::move(fs)};
}

// ------------------------------------------------------------------
// Residuals

/// Relation residual on an evaluated figure, via the DSL evaluator.
template <typename T>
T residual(const Relation& r, Env<T>& env) {
  dsl::detail::Evaluator<T> ev(env);
  dsl::Assertion a = r.assertion();
  try {
    if (!a.rhs) return ev.predicate(a.lhs);
    return dsl::detail::equation_residual(ev.scalar(a.lhs), ev.scalar(*a.rhs));
  } catch (const GeometryError&) {
    return std::numeric_limits<T>::infinity();
  } catch (const std::bad_variant_access&) {
    return std::numeric_limits<T>::infinity();
  }
}

namespace detail {

inline double rel(double x, double y) {
  double m = std::max(std::abs(x), std::abs(y));
  return m > 0 ? std::abs(x - y) / m : 0.0;
}

struct Candidate {
  Relation relation;
  std::vector<std::size_t> scalar_ids;  // for mined relations
  std::vector<std::size_t> ids;         // object indices for incidences
};

/// Max over samples of f(sample); stops early once above eps.
template <typename F>
double max_over(const std::vector<FeatureSet<double>>& fs, double eps, F&& f) {
  double worst = 0;
  for (const auto& s : fs) {
    double r = f(s);
    if (!(r <= eps)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace detail

struct DetectOptions {
  TolerancePolicy policy;
};

/// Incidences holding on every sample at fast precision.
inline std::vector<std::pair<Relation, double>> detect_incidence_fast(const FeaturePlan& plan,
                                                                      const std::vector<FeatureSet<double>>& fs,
                                                                      const DetectOptions& opt = {}) {
  std::vector<std::pair<Relation, double>> out;
  if (fs.empty()) return out;
  const double eps = opt.policy.eps_detect;
  const auto& s0 = fs[0];
  const auto& tol0 = s0.tol;
  const std::size_t np = plan.points.size(), nl = plan.lines.size(), nc = plan.circles.size();
  auto emit = [&](RelationKind k, std::vector<Expr> ops, std::vector<std::set<std::string>> objs, double res) {
    std::set<std::string> all;
    for (const auto& o : objs) all.insert(o.begin(), o.end());
    if (!plan.touches_focus(all)) return;
    Relation r;
    r.kind = k;
    r.operands = std::move(ops);
    out.emplace_back(std::move(r), res);
  };

  // Points: coincidences, then representatives for everything else.
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < np; ++i) {
    bool dup = false;
    for (std::size_t j : reps) {
      double r = detail::max_over(fs, eps, [&](const auto& s) { return residual::coincide(s.points[i], s.points[j], s.tol); });
      if (r <= eps) {
        emit(RelationKind::Coincident, {plan.points[j].expr, plan.points[i].expr},
             {plan.points[j].objects, plan.points[i].objects}, r);
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(i);
  }
  for (std::size_t x = 0; x < reps.size(); ++x)
    for (std::size_t y = x + 1; y < reps.size(); ++y)
      for (std::size_t z = y + 1; z < reps.size(); ++z) {
        std::size_t i = reps[x], j = reps[y], k = reps[z];
        if (residual::collinear(s0.points[i], s0.points[j], s0.points[k], tol0) > eps) continue;
        double r = detail::max_over(fs, eps, [&](const auto& s) {
          return residual::collinear(s.points[i], s.points[j], s.points[k], s.tol);
        });
        if (r <= eps) {
          emit(RelationKind::Collinear, {plan.points[i].expr, plan.points[j].expr, plan.points[k].expr},
               {plan.points[i].objects, plan.points[j].objects, plan.points[k].objects}, r);
        }
      }

  // Lines: drop duplicates (sample 0) and lines through coincident points.
  auto finite_line = [](const Line<double>& l) { return std::isfinite(l.a) && std::isfinite(l.c); };
  auto same_line = [&](const Line<double>& l, const Line<double>& m, const Tolerance<double>& t) {
    return residual::parallel(l, m) <= eps && std::abs(std::abs(l.c) - std::abs(m.c)) / t.scale <= eps &&
           std::abs(l.a * m.c - m.a * l.c) / t.scale + std::abs(l.b * m.c - m.b * l.c) / t.scale <= 2 * eps;
  };
  std::vector<std::size_t> lreps;
  for (std::size_t i = 0; i < nl; ++i) {
    if (!finite_line(s0.lines[i])) continue;
    bool dup = false;
    for (std::size_t j : lreps)
      if (same_line(s0.lines[i], s0.lines[j], tol0)) {
        dup = true;
        break;
      }
    if (!dup) lreps.push_back(i);
  }
  for (std::size_t x = 0; x < lreps.size(); ++x)
    for (std::size_t y = x + 1; y < lreps.size(); ++y) {
      std::size_t i = lreps[x], j = lreps[y];
      const auto& li = plan.lines[i];
      const auto& lj = plan.lines[j];
      if (residual::parallel(s0.lines[i], s0.lines[j]) <= eps) {
        double r = detail::max_over(fs, eps, [&](const auto& s) { return residual::parallel(s.lines[i], s.lines[j]); });
        if (r <= eps) emit(RelationKind::Parallel, {li.expr, lj.expr}, {li.objects, lj.objects}, r);
      }
      if (residual::perpendicular(s0.lines[i], s0.lines[j]) <= eps) {
        double r = detail::max_over(fs, eps, [&](const auto& s) { return residual::perpendicular(s.lines[i], s.lines[j]); });
        if (r <= eps) emit(RelationKind::Perpendicular, {li.expr, lj.expr}, {li.objects, lj.objects}, r);
      }
    }
  for (std::size_t x = 0; x < lreps.size(); ++x)
    for (std::size_t y = x + 1; y < lreps.size(); ++y)
      for (std::size_t z = y + 1; z < lreps.size(); ++z) {
        std::size_t i = lreps[x], j = lreps[y], k = lreps[z];
        const auto& L = s0.lines;
        if (residual::concurrent(L[i], L[j], L[k], tol0) > eps) continue;
        if (residual::parallel(L[i], L[j]) <= eps || residual::parallel(L[j], L[k]) <= eps ||
            residual::parallel(L[i], L[k]) <= eps)
          continue;
        // Concurrence at a named point is already a set of collinearities.
        bool at_point = false;
        for (std::size_t p : reps) {
          const auto& P = s0.points[p];
          if (residual::on_line(P, L[i], tol0) <= eps && residual::on_line(P, L[j], tol0) <= eps &&
              residual::on_line(P, L[k], tol0) <= eps) {
            at_point = true;
            break;
          }
        }
        if (at_point) continue;
        double r = detail::max_over(fs, eps, [&](const auto& s) {
          return residual::concurrent(s.lines[i], s.lines[j], s.lines[k], s.tol);
        });
        if (r <= eps) {
          emit(RelationKind::Concurrent, {plan.lines[i].expr, plan.lines[j].expr, plan.lines[k].expr},
               {plan.lines[i].objects, plan.lines[j].objects, plan.lines[k].objects}, r);
        }
      }

  // Circles.
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& cs = plan.circles[c];
    for (std::size_t l : lreps) {
      if (residual::tangent(s0.circles[c], s0.lines[l], tol0) > eps) continue;
      double r = detail::max_over(fs, eps, [&](const auto& s) { return residual::tangent(s.circles[c], s.lines[l], s.tol); });
      if (r <= eps) emit(RelationKind::Tangent, {cs.expr, plan.lines[l].expr}, {cs.objects, plan.lines[l].objects}, r);
    }
    for (std::size_t d = c + 1; d < nc; ++d) {
      const auto& ds = plan.circles[d];
      if (residual::tangent(s0.circles[c], s0.circles[d], tol0) <= eps) {
        double r = detail::max_over(fs, eps, [&](const auto& s) { return residual::tangent(s.circles[c], s.circles[d], s.tol); });
        if (r <= eps) emit(RelationKind::Tangent, {cs.expr, ds.expr}, {cs.objects, ds.objects}, r);
      }
    }
    for (std::size_t p : reps) {
      // A circle's own center is never on it.
      if (residual::on_circle(s0.points[p], s0.circles[c], tol0) > eps) continue;
      double r = detail::max_over(fs, eps, [&](const auto& s) { return residual::on_circle(s.points[p], s.circles[c], s.tol); });
      if (r <= eps) emit(RelationKind::OnCircle, {plan.points[p].expr, cs.expr}, {plan.points[p].objects, cs.objects}, r);
    }
  }
  return out;
}

struct MineOptions {
  int max_coefficient = 12;
  TolerancePolicy policy;
};

/// Scalar relations holding on every sample at fast precision.
inline std::vector<std::pair<Relation, double>> mine_relations_fast(const FeaturePlan& plan,
                                                                    const std::vector<FeatureSet<double>>& fs,
                                                                    const MineOptions& opt = {}) {
  std::vector<std::pair<Relation, double>> out;
  if (fs.empty()) return out;
  const double eps = opt.policy.eps_detect;
  const int M = opt.max_coefficient;
  const auto& s0 = fs[0].scalars;
  const auto& F = plan.scalars;

  // Usable features: finite and clearly nonzero on sample 0.
  std::vector<std::size_t> len, area, ang, other;
  for (std::size_t i = 0; i < F.size(); ++i) {
    double v = s0[i];
    if (!std::isfinite(v)) continue;
    const auto& tol = fs[0].tol;
    switch (F[i].dim) {
      case Dim::Length:
        if (v > 1e-6 * tol.scale) len.push_back(i);
        break;
      case Dim::Area:
        if (v > 1e-6 * tol.scale * tol.scale) area.push_back(i);
        break;
      case Dim::Angle:
        if (v > 1e-6 && v < pi<double>() - 1e-6) ang.push_back(i);
        break;
      case Dim::Other:
        if (std::abs(v) > 1e-12) other.push_back(i);
        break;
    }
  }

  std::vector<char> in_focus(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) in_focus[i] = plan.touches_focus(F[i].objects);
  auto touches = [&](std::initializer_list<std::size_t> ids) {
    for (auto i : ids)
      if (in_focus[i]) return true;
    return false;
  };
  auto all_samples = [&](auto&& f) {
    double worst = 0;
    for (const auto& s : fs) {
      double r = f(s.scalars);
      if (!(r <= eps)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, r);
    }
    return worst;
  };

  // Pairs related by a ratio, so longer relations built from them are skipped.
  std::set<std::pair<std::size_t, std::size_t>> proportional;
  auto linked = [&](std::size_t i, std::size_t j) {
    return proportional.count({std::min(i, j), std::max(i, j)}) > 0;
  };

  auto pairs = [&](const std::vector<std::size_t>& cls) {
    for (std::size_t x = 0; x < cls.size(); ++x)
      for (std::size_t y = x + 1; y < cls.size(); ++y) {
        std::size_t i = cls[x], j = cls[y];
        double ratio = s0[i] / s0[j];
        for (int q = 1; q <= M; ++q) {
          long long p = std::llround(ratio * q);
          if (p < 1 || p > M || std::gcd(p, static_cast<long long>(q)) != 1) continue;
          if (std::abs(ratio * q - static_cast<double>(p)) > eps * static_cast<double>(p)) continue;
          double r = all_samples([&](const auto& v) { return detail::rel(q * v[i], p * v[j]); });
          if (!(r <= eps)) break;
          proportional.insert({i, j});
          if (!touches({i, j})) break;
          Relation rel;
          rel.operands = {F[i].expr, F[j].expr};
          if (p == q) {
            rel.kind = F[i].radius && F[j].radius ? RelationKind::CongruentCircles : RelationKind::Equality;
            if (rel.kind == RelationKind::CongruentCircles) rel.operands = {F[i].expr.args[0], F[j].expr.args[0]};
          } else {
            rel.kind = RelationKind::RationalRatio;
            rel.coefficients = {p, q};
          }
          out.emplace_back(std::move(rel), r);
          break;
        }
      }
  };

  auto linear3 = [&](const std::vector<std::size_t>& cls) {
    for (std::size_t x = 0; x < cls.size(); ++x)
      for (std::size_t y = x + 1; y < cls.size(); ++y) {
        std::size_t i = cls[x], j = cls[y];
        if (linked(i, j)) continue;
        for (std::size_t z = y + 1; z < cls.size(); ++z) {
          std::size_t k = cls[z];
          if (linked(i, k) || linked(j, k) || !touches({i, j, k})) continue;
          double fi = s0[i], fj = s0[j], fk = s0[k];
          const double x = fi / fk, y = fj / fk, lim = M + 0.5;
          for (long long c1 = 1; c1 <= M; ++c1)
            for (long long c2 = -M; c2 <= M; ++c2) {
              if (c2 == 0) continue;
              double c3 = -(static_cast<double>(c1) * x + static_cast<double>(c2) * y);
              if (c3 >= lim || c3 <= -lim) continue;
              long long r3 = static_cast<long long>(c3 < 0 ? c3 - 0.5 : c3 + 0.5);
              if (r3 == 0 || std::abs(c3 - static_cast<double>(r3)) > 1e-6) continue;
              double scale = std::max({std::abs(c1 * fi), std::abs(c2 * fj), std::abs(r3 * fk)});
              if (std::abs(c1 * fi + c2 * fj + r3 * fk) > eps * scale) continue;
              if (std::gcd(std::gcd(c1, c2 < 0 ? -c2 : c2), r3 < 0 ? -r3 : r3) != 1) continue;
              double r = all_samples([&](const auto& v) {
                double pos = 0, neg = 0;
                for (auto [c, f] : {std::pair{c1, v[i]}, std::pair{c2, v[j]}, std::pair{r3, v[k]}})
                  (c > 0 ? pos : neg) += std::abs(static_cast<double>(c)) * f;
                return detail::rel(pos, neg);
              });
              if (!(r <= eps)) continue;
              Relation rel;
              rel.kind = RelationKind::LinearInteger;
              rel.operands = {F[i].expr, F[j].expr, F[k].expr};
              rel.coefficients = {c1, c2, r3};
              out.emplace_back(std::move(rel), r);
            }
        }
      }
  };

  // 1/f_i + 1/f_j = 1/f_k and f_i^2 + f_j^2 = f_k^2 (other sign patterns are reorderings).
  auto reciprocal_quadratic = [&](const std::vector<std::size_t>& cls, bool quadratic_too) {
    for (std::size_t x = 0; x < cls.size(); ++x)
      for (std::size_t y = x + 1; y < cls.size(); ++y) {
        std::size_t i = cls[x], j = cls[y];
        for (std::size_t k : cls) {
          if (k == i || k == j || linked(i, j) || linked(i, k) || linked(j, k) || !touches({i, j, k})) continue;
          double fi = s0[i], fj = s0[j], fk = s0[k];
          if (detail::rel(1 / fi + 1 / fj, 1 / fk) <= eps) {
            double r = all_samples([&](const auto& v) { return detail::rel(1 / v[i] + 1 / v[j], 1 / v[k]); });
            if (r <= eps) {
              Relation rel;
              rel.kind = RelationKind::Reciprocal;
              rel.operands = {F[i].expr, F[j].expr, F[k].expr};
              out.emplace_back(std::move(rel), r);
            }
          }
          if (quadratic_too && detail::rel(fi * fi + fj * fj, fk * fk) <= eps) {
            double r = all_samples([&](const auto& v) { return detail::rel(v[i] * v[i] + v[j] * v[j], v[k] * v[k]); });
            if (r <= eps) {
              Relation rel;
              rel.kind = RelationKind::Quadratic;
              rel.operands = {F[i].expr, F[j].expr, F[k].expr};
              rel.coefficients = {1, 1, -1};
              out.emplace_back(std::move(rel), r);
            }
          }
        }
      }
  };

  // f_i^2 + f_j^2 = f_k^2 + f_l^2 with {i, j} the lexicographically smaller pair.
  auto quadratic4 = [&](const std::vector<std::size_t>& cls) {
    const std::size_t n = cls.size();
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> sums;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        double fi = s0[cls[x]], fj = s0[cls[y]];
        sums.push_back({fi * fi + fj * fj, {cls[x], cls[y]}});
      }
    std::sort(sums.begin(), sums.end());
    for (std::size_t u = 0; u < sums.size(); ++u) {
      for (std::size_t w = u + 1; w < sums.size() && sums[w].first - sums[u].first <= eps * sums[w].first; ++w) {
        auto [i, j] = sums[u].second;
        auto [k, l] = sums[w].second;
        if (i == k || i == l || j == k || j == l) continue;
        if (linked(i, j) || linked(k, l) || linked(i, k) || linked(i, l) || linked(j, k) || linked(j, l)) continue;
        if (!touches({i, j, k, l})) continue;
        std::pair<std::size_t, std::size_t> p1{std::min(i, j), std::max(i, j)}, p2{std::min(k, l), std::max(k, l)};
        if (p2 < p1) std::swap(p1, p2);
        double r = all_samples([&](const auto& v) {
          return detail::rel(v[p1.first] * v[p1.first] + v[p1.second] * v[p1.second],
                             v[p2.first] * v[p2.first] + v[p2.second] * v[p2.second]);
        });
        if (!(r <= eps)) continue;
        Relation rel;
        rel.kind = RelationKind::Quadratic;
        rel.operands = {F[p1.first].expr, F[p1.second].expr, F[p2.first].expr, F[p2.second].expr};
        rel.coefficients = {1, 1, -1, -1};
        out.emplace_back(std::move(rel), r);
      }
    }
  };

  auto angles = [&]() {
    const double PI = pi<double>();
    for (std::size_t x = 0; x < ang.size(); ++x)
      for (std::size_t y = x + 1; y < ang.size(); ++y) {
        std::size_t i = ang[x], j = ang[y];
        if (!touches({i, j})) continue;
        if (detail::rel(s0[i], s0[j]) <= eps) {
          double r = all_samples([&](const auto& v) { return detail::rel(v[i], v[j]); });
          if (r <= eps) {
            Relation rel;
            rel.kind = RelationKind::AngleEquality;
            rel.operands = {F[i].expr, F[j].expr};
            out.emplace_back(std::move(rel), r);
          }
        }
        if (detail::rel(s0[i] + s0[j], PI) <= eps) {
          double r = all_samples([&](const auto& v) { return detail::rel(v[i] + v[j], PI); });
          if (r <= eps) {
            Relation rel;
            rel.kind = RelationKind::AngleSupplementary;
            rel.operands = {F[i].expr, F[j].expr};
            out.emplace_back(std::move(rel), r);
          }
        }
      }
  };

  pairs(len);
  pairs(area);
  pairs(other);
  linear3(len);
  linear3(area);
  linear3(other);
  reciprocal_quadratic(len, true);
  reciprocal_quadratic(other, false);
  quadratic4(len);
  angles();
  return out;
}

// ------------------------------------------------------------------
// Triviality baselines

struct GenericWeights {
  // Irrational-looking weights so the generic points satisfy no accidental relation.
  std::string u = "0.3819660112501051", v = "0.2360679774997897";
  std::string u2 = "0.4142135623730950", v2 = "0.3166247903554000";
};

namespace detail {

inline Expr generic_point(const Expr& x, const Expr& y, const Expr& z, const std::string& u, const std::string& v) {
  return Expr::call("pointon", {Expr::call("pointon", {x, y, Expr::number(u)}), z, Expr::number(v)});
}

inline Expr genericize(const Expr& e, const dsl::Script& s, const GenericWeights& w) {
  Expr out = e;
  for (auto& a : out.args) a = genericize(a, s, w);
  if (out.op != Expr::Op::Call) return out;
  if (out.text == "gergonne" && out.args.size() == 3) {
    return generic_point(out.args[0], out.args[1], out.args[2], w.u, w.v);
  }
  if (out.text == "cevian" && out.args.size() == 4 && out.args[3].text == "gergonne") {
    Expr p = generic_point(out.args[0], out.args[1], out.args[2], w.u, w.v);
    return Expr::call("intersect", {Expr::call("line", {out.args[0], p}), Expr::call("line", {out.args[1], out.args[2]})});
  }
  if (out.text == "touch" && out.args.size() == 1) {
    // A generic point between the two points that name the line, when they are known.
    const Expr& l = out.args[0];
    if (l.op == Expr::Op::Call && l.text == "line") return Expr::call("pointon", {l.args[0], l.args[1], Expr::number(w.u2)});
    if (l.op == Expr::Op::Ident && l.text.size() == 2) {
      return Expr::call("pointon", {Expr::ident(l.text.substr(0, 1)), Expr::ident(l.text.substr(1, 1)), Expr::number(w.u2)});
    }
    Expr g = generic_point(Expr::ident(s.vertices[0]), Expr::ident(s.vertices[1]), Expr::ident(s.vertices[2]), w.u2, w.v2);
    return Expr::call("foot", {g, l});
  }
  return out;
}

}  // namespace detail

/// Script with every Gergonne-specific element replaced by a generic one:
/// Gergonne points by a fixed interior point, incircle touch points by feet
/// from another interior point.
inline dsl::Script generic_baseline(const dsl::Script& s, const GenericWeights& w = {}) {
  dsl::Script out = s;
  for (auto& st : out.body) {
    if (auto* a = std::get_if<dsl::Assignment>(&st)) a->value = detail::genericize(a->value, s, w);
    else {
      auto& as = std::get<dsl::Assertion>(st);
      as.lhs = detail::genericize(as.lhs, s, w);
      if (as.rhs) *as.rhs = detail::genericize(*as.rhs, s, w);
    }
  }
  return out;
}

inline dsl::Script unconstrained(const dsl::Script& s) {
  dsl::Script out = s;
  out.constraints.clear();
  return out;
}

/// Facts that restate how a step was defined.
inline bool definitional(const Relation& r, const dsl::Script& s) {
  auto bound = [&](const Expr& e) -> const Expr* {
    if (e.op != Expr::Op::Ident) return nullptr;
    for (const auto& st : s.body)
      if (auto* a = std::get_if<dsl::Assignment>(&st); a && a->name == e.text) return &a->value;
    return nullptr;
  };
  auto strip_select = [](const Expr* e) { return e && e->text == "select" && e->op == Expr::Op::Call ? &e->args[0] : e; };
  if (r.kind == RelationKind::Perpendicular || r.kind == RelationKind::Parallel) {
    const char* fn = r.kind == RelationKind::Perpendicular ? "perpendicular" : "parallel";
    for (int k = 0; k < 2; ++k) {
      const Expr* def = bound(r.operands[k]);
      if (def && def->op == Expr::Op::Call && def->text == fn && dsl::same(def->args[1], r.operands[1 - k])) return true;
    }
  }
  if (r.kind == RelationKind::Tangent || r.kind == RelationKind::OnCircle) {
    const Expr& circ = r.kind == RelationKind::Tangent ? r.operands[0] : r.operands[1];
    const Expr& other = r.kind == RelationKind::Tangent ? r.operands[1] : r.operands[0];
    const Expr* def = strip_select(bound(circ));
    if (def && def->op == Expr::Op::Call && def->text == "apollonius") {
      for (const auto& a : def->args)
        if (dsl::same(a, other)) return true;
    }
  }
  if ((r.kind == RelationKind::AngleEquality || r.kind == RelationKind::AngleSupplementary) && r.operands.size() == 2) {
    // A circle tangent to two lines through V has its center on a bisector at V.
    const Expr& u = r.operands[0];
    const Expr& v = r.operands[1];
    if (u.text != "angle" || v.text != "angle" || !dsl::same(u.args[1], v.args[1])) return false;
    const Expr& vertex = u.args[1];
    for (int i : {0, 2})
      for (int j : {0, 2}) {
        if (!dsl::same(u.args[i], v.args[j])) continue;
        const Expr& c = u.args[i];
        if (c.op != Expr::Op::Call || c.text != "center") continue;
        const Expr* def = strip_select(bound(c.args[0]));
        if (!def || def->op != Expr::Op::Call || def->text != "apollonius") continue;
        auto through = [&](const Expr& l, const Expr& p) {
          return l.op == Expr::Op::Call && l.text == "line" &&
                 ((dsl::same(l.args[0], vertex) && dsl::same(l.args[1], p)) ||
                  (dsl::same(l.args[1], vertex) && dsl::same(l.args[0], p)));
        };
        const Expr& p = u.args[2 - i];
        const Expr& q = v.args[2 - j];
        int hits = 0;
        for (const auto& a : def->args) hits += through(a, p) || through(a, q);
        if (hits >= 2) return true;
      }
  }
  return false;
}

/// Point triples known to be collinear, as formatted operand text.
using CollinearSet = std::vector<std::set<std::string>>;

/// Segment and area additivity and same-vertex angle facts that follow from a
/// collinearity already in the catalog together with the order of the points.
inline bool implied_by_collinearity(const Relation& r, const CollinearSet& lines) {
  if (lines.empty()) return false;
  auto collinear = [&](const std::set<std::string>& pts) {
    if (pts.size() != 3) return false;
    for (const auto& l : lines)
      if (l == pts) return true;
    return false;
  };
  auto args = [](const Expr& e) {
    std::vector<std::string> out;
    for (const auto& a : e.args) out.push_back(dsl::format(a));
    return out;
  };
  auto unit = [&] {
    for (long long c : r.coefficients)
      if (c != 1 && c != -1) return false;
    return true;
  };
  if (r.kind == RelationKind::LinearInteger && r.operands.size() == 3 && unit()) {
    const std::string fn = r.operands[0].text;
    for (const auto& o : r.operands)
      if (o.op != Expr::Op::Call || o.text != fn) return false;
    if (fn == "dist") {
      std::set<std::string> pts;
      for (const auto& o : r.operands)
        for (const auto& a : args(o)) pts.insert(a);
      return collinear(pts);
    }
    if (fn == "area") {
      std::vector<std::vector<std::string>> tri;
      for (const auto& o : r.operands) tri.push_back(args(o));
      for (const auto& x : tri[0]) {
        bool shared = true;
        std::set<std::string> rest;
        for (const auto& t : tri) {
          if (std::find(t.begin(), t.end(), x) == t.end()) shared = false;
          for (const auto& p : t)
            if (p != x) rest.insert(p);
        }
        if (shared && collinear(rest)) return true;
      }
    }
    return false;
  }
  if ((r.kind == RelationKind::AngleEquality || r.kind == RelationKind::AngleSupplementary) && r.operands.size() == 2) {
    const Expr& u = r.operands[0];
    const Expr& v = r.operands[1];
    if (u.text != "angle" || v.text != "angle" || u.args.size() != 3 || v.args.size() != 3) return false;
    auto p = args(u), q = args(v);
    if (p[1] != q[1]) return false;
    const std::string& vertex = p[1];
    for (int i : {0, 2})
      for (int j : {0, 2}) {
        if (p[i] != q[j]) continue;
        const std::string& a = p[2 - i];
        const std::string& b = q[2 - j];
        if (a != b && a != vertex && b != vertex && collinear({vertex, a, b})) return true;
      }
  }
  return false;
}

// ------------------------------------------------------------------
// Full analysis of one script

/// Triangles used for one script: detection, confirmation and baselines.
struct SampleBank {
  std::vector<TriangleSample> detect;    // fast precision, >= 8
  std::vector<TriangleSample> confirm;   // confirm precision, fresh
  std::vector<TriangleSample> free;      // unconstrained, for constrained scripts

  static SampleBank make(const dsl::ConstraintSet& cs, std::uint64_t seed, int n_detect = 8, int n_confirm = 3) {
    SampleBank b;
    b.detect = sample(cs, n_detect, seed);
    b.confirm = sample(cs, n_confirm, seed + 0x9e3779b97f4a7c15ULL);
    if (!cs.empty()) b.free = sample(dsl::ConstraintSet{}, n_confirm, seed + 0x3c6ef372fe94f82bULL);
    return b;
  }
};

struct AnalyzeOptions {
  TolerancePolicy policy;
  PlanOptions plan;
  bool mine = true;
  bool incidences = true;
  /// Judge triviality with baselines; off for callers that only need confirmation.
  bool baselines = true;
};

struct Analysis {
  std::vector<Finding> findings;
  /// Set when the script could not be evaluated on some sample.
  std::string skipped;
};

namespace detail {

template <typename T>
std::vector<Env<T>> evaluate_all(const dsl::Script& s, const std::vector<TriangleSample>& samples,
                                 const TolerancePolicy& policy) {
  std::vector<Env<T>> out;
  out.reserve(samples.size());
  for (const auto& smp : samples) {
    Env<T> env(smp.realize<T>(), policy, s.vertices);
    for (const auto& st : s.body) dsl::evaluate_statement(st, env);
    out.push_back(std::move(env));
  }
  return out;
}

/// Max residual over figures; infinity when a baseline figure cannot be evaluated.
inline double max_residual(const Relation& r, std::vector<Env<Confirm>>& envs) {
  Confirm worst(0);
  for (auto& e : envs) {
    Confirm x = residual(r, e);
    if (!is_finite(x)) return std::numeric_limits<double>::infinity();
    if (x > worst) worst = x;
  }
  return to_double(worst);
}

}  // namespace detail

/// Detects, confirms and classifies every relation of a script's figure.
inline Analysis analyze(const dsl::Script& script, const SampleBank& bank, const AnalyzeOptions& opt = {}) {
  Analysis out;
  std::vector<Env<double>> fast;
  std::vector<Env<Confirm>> confirm;
  try {
    fast = detail::evaluate_all<double>(script, bank.detect, opt.policy);
  } catch (const GeometryError& e) {
    out.skipped = e.what();
    return out;
  }
  FeaturePlan plan = make_plan(fast[0], opt.plan);
  std::vector<FeatureSet<double>> fs;
  for (const auto& e : fast) fs.push_back(extract(plan, e));

  std::vector<std::pair<Relation, double>> cands;
  if (opt.incidences) {
    auto inc = detect_incidence_fast(plan, fs, {opt.policy});
    cands.insert(cands.end(), inc.begin(), inc.end());
  }
  if (opt.mine) {
    auto rel = mine_relations_fast(plan, fs, {12, opt.policy});
    cands.insert(cands.end(), rel.begin(), rel.end());
  }
  if (cands.empty()) return out;

  try {
    confirm = detail::evaluate_all<Confirm>(script, bank.confirm, opt.policy);
  } catch (const GeometryError& e) {
    out.skipped = e.what();
    return out;
  }
  bool have_generic = false, have_free = false;
  CollinearSet lines;
  std::vector<Env<Confirm>> generic, freeenv;
  for (auto& [rel, fast_res] : cands) {
    double conf = detail::max_residual(rel, confirm);
    if (!(conf <= opt.policy.eps_confirm)) continue;
    Finding f;
    f.relation = rel;
    f.evidence.samples = static_cast<int>(bank.detect.size());
    f.evidence.max_residual_fast = fast_res;
    f.evidence.max_residual_confirm = conf;
    if (opt.baselines) {
      if (!have_generic) {
        have_generic = true;
        try {
          generic = detail::evaluate_all<Confirm>(generic_baseline(script), bank.confirm, opt.policy);
        } catch (const GeometryError&) {
          generic.clear();
        }
      }
      double neg = generic.empty() ? std::numeric_limits<double>::infinity() : detail::max_residual(rel, generic);
      bool trivial = neg <= opt.policy.eps_confirm;
      if (!trivial && !script.constraints.empty() && !bank.free.empty()) {
        if (!have_free) {
          have_free = true;
          try {
            freeenv = detail::evaluate_all<Confirm>(unconstrained(script), bank.free, opt.policy);
          } catch (const GeometryError&) {
            freeenv.clear();
          }
        }
        if (!freeenv.empty() && detail::max_residual(rel, freeenv) <= opt.policy.eps_confirm) trivial = true;
      }
      f.evidence.negative_control_residual = std::isfinite(neg) ? std::min(neg, 1.0) : 1.0;
      f.trivial = trivial || definitional(rel, script) || implied_by_collinearity(rel, lines);
    }
    if (rel.kind == RelationKind::Collinear) {
      std::set<std::string> pts;
      for (const auto& o : rel.operands) pts.insert(dsl::format(o));
      lines.push_back(std::move(pts));
    }
    out.findings.push_back(std::move(f));
  }
  return out;
}

}  // namespace gex::detect
