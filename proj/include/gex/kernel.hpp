#pragma once

#include "gex/error.hpp"
#include "gex/real.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gex {

// ------------------------------------------------------------------
// Tolerance policy
// ------------------------------------------------------------------

/// Relative thresholds for the two precisions. All checks are relativized by the
/// figure scale (largest pairwise vertex distance of the starting triangle).
struct TolerancePolicy {
  double eps_detect = 1e-10;
  double eps_confirm = 1e-24;

  void validate() const {
    if (!(0.0 < eps_confirm && eps_confirm < eps_detect && eps_detect < 1.0)) {
      throw GeometryError(ErrorKind::DegenerateInput,
                          "tolerance policy requires 0 < eps_confirm < eps_detect < 1");
    }
  }

  template <typename T>
  double eps() const {
    if constexpr (std::is_same_v<T, Fast>) {
      return eps_detect;
    } else {
      return eps_confirm;
    }
  }
};

/// Tolerance bound to one precision and one figure.
template <typename T>
struct Tolerance {
  T scale = T(1);
  double eps = PrecisionTraits<T>::kDefaultEps;

  Tolerance() = default;
  Tolerance(T figure_scale, double relative_eps) : scale(std::move(figure_scale)), eps(relative_eps) {}
  Tolerance(T figure_scale, const TolerancePolicy& policy)
      : scale(std::move(figure_scale)), eps(policy.eps<T>()) {}

  /// Absolute threshold for a quantity with the given length dimension.
  T length() const { return T(eps) * scale; }
  T area() const { return T(eps) * scale * scale; }
};

// ------------------------------------------------------------------
// Primitives
// ------------------------------------------------------------------

template <typename T>
struct Point {
  T x{};
  T y{};

  friend Point operator+(const Point& p, const Point& q) { return {p.x + q.x, p.y + q.y}; }
  friend Point operator-(const Point& p, const Point& q) { return {p.x - q.x, p.y - q.y}; }
  friend Point operator*(const T& k, const Point& p) { return {k * p.x, k * p.y}; }
  friend Point operator*(const Point& p, const T& k) { return {k * p.x, k * p.y}; }
  friend Point operator/(const Point& p, const T& k) { return {p.x / k, p.y / k}; }
  friend bool operator==(const Point&, const Point&) = default;

  template <typename U>
  Point<U> cast() const {
    return {real_cast<U>(x), real_cast<U>(y)};
  }
};

template <typename T>
inline T dot(const Point<T>& p, const Point<T>& q) {
  return p.x * q.x + p.y * q.y;
}

template <typename T>
inline T cross(const Point<T>& p, const Point<T>& q) {
  return p.x * q.y - p.y * q.x;
}

template <typename T>
inline T norm(const Point<T>& p) {
  using std::sqrt;
  return sqrt(dot(p, p));
}

/// Points ordered by x, then y. Used for deterministic multi-valued results.
template <typename T>
inline bool lex_less(const Point<T>& p, const Point<T>& q) {
  return p.x < q.x || (p.x == q.x && p.y < q.y);
}

/// Line {(x,y) : ax + by + c = 0} with a^2 + b^2 = 1 and (a,b) lexicographically positive.
template <typename T>
struct Line {
  T a{};
  T b{};
  T c{};

  Point<T> normal() const { return {a, b}; }
  Point<T> direction() const { return {-b, a}; }
  T eval(const Point<T>& p) const { return a * p.x + b * p.y + c; }

  template <typename U>
  Line<U> cast() const {
    return {real_cast<U>(a), real_cast<U>(b), real_cast<U>(c)};
  }
};

template <typename T>
struct Circle {
  Point<T> center;
  T radius{};

  template <typename U>
  Circle<U> cast() const {
    return {center.template cast<U>(), real_cast<U>(radius)};
  }
};

/// Builds a normalized line from raw coefficients.
template <typename T>
Line<T> make_line(T a, T b, T c) {
  using std::sqrt;
  T n = sqrt(a * a + b * b);
  if (!(n > T(0)) || !is_finite(n)) {
    throw GeometryError(ErrorKind::DegenerateInput, "line normal vanishes");
  }
  a /= n;
  b /= n;
  c /= n;
  if (a < T(0) || (a == T(0) && b < T(0))) {
    a = -a;
    b = -b;
    c = -c;
  }
  return {a, b, c};
}

// ------------------------------------------------------------------
// Constructions
// ------------------------------------------------------------------

template <typename T>
inline T dist(const Point<T>& p, const Point<T>& q) {
  return norm(q - p);
}

template <typename T>
Line<T> line_through(const Point<T>& p, const Point<T>& q, const Tolerance<T>& tol) {
  Point<T> d = q - p;
  if (!(norm(d) > tol.length())) {
    throw GeometryError(ErrorKind::DegenerateInput, "line through coincident points");
  }
  // Normal (dy, -dx); c chosen so p lies on the line.
  return make_line(d.y, -d.x, d.x * p.y - d.y * p.x);
}

template <typename T>
Point<T> intersect_ll(const Line<T>& l1, const Line<T>& l2, const Tolerance<T>& tol) {
  using std::abs;
  T det = l1.a * l2.b - l2.a * l1.b;
  if (!(abs(det) > T(tol.eps))) {
    throw GeometryError(ErrorKind::ParallelLines, "lines are parallel");
  }
  return {(l1.b * l2.c - l2.b * l1.c) / det, (l2.a * l1.c - l1.a * l2.c) / det};
}

template <typename T>
Point<T> foot(const Point<T>& p, const Line<T>& l) {
  T d = l.eval(p);
  return {p.x - d * l.a, p.y - d * l.b};
}

template <typename T>
Point<T> reflect(const Point<T>& p, const Line<T>& l) {
  T d = T(2) * l.eval(p);
  return {p.x - d * l.a, p.y - d * l.b};
}

template <typename T>
Point<T> midpoint(const Point<T>& p, const Point<T>& q) {
  return {(p.x + q.x) / T(2), (p.y + q.y) / T(2)};
}

template <typename T>
Line<T> parallel_through(const Point<T>& p, const Line<T>& l) {
  return make_line(l.a, l.b, -(l.a * p.x + l.b * p.y));
}

template <typename T>
Line<T> perpendicular_through(const Point<T>& p, const Line<T>& l) {
  // Normal of the perpendicular is the direction of l.
  return make_line(-l.b, l.a, l.b * p.x - l.a * p.y);
}

/// Zero, one (tangency) or two points ordered by (x, y).
template <typename T>
std::vector<Point<T>> intersect_lc(const Line<T>& l, const Circle<T>& c, const Tolerance<T>& tol) {
  using std::abs;
  using std::sqrt;
  T d = l.eval(c.center);
  Point<T> f = {c.center.x - d * l.a, c.center.y - d * l.b};
  T gap = abs(d) - c.radius;
  if (abs(gap) <= tol.length()) return {f};
  if (gap > T(0)) return {};
  T h = sqrt(c.radius * c.radius - d * d);
  Point<T> dir = l.direction();
  std::vector<Point<T>> out = {f - h * dir, f + h * dir};
  if (lex_less(out[1], out[0])) std::swap(out[0], out[1]);
  return out;
}

template <typename T>
std::vector<Point<T>> intersect_cc(const Circle<T>& c1, const Circle<T>& c2, const Tolerance<T>& tol) {
  using std::abs;
  using std::sqrt;
  Point<T> delta = c2.center - c1.center;
  T d = norm(delta);
  if (d <= tol.length()) {
    if (abs(c1.radius - c2.radius) <= tol.length()) {
      throw GeometryError(ErrorKind::CoincidentCircles, "circles coincide");
    }
    return {};
  }
  T outer = d - (c1.radius + c2.radius);
  T inner = d - abs(c1.radius - c2.radius);
  if (outer > tol.length() || inner < -tol.length()) return {};
  Point<T> u = delta / d;
  // Distance from c1.center to the radical line along u.
  T along = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (T(2) * d);
  Point<T> base = c1.center + along * u;
  if (abs(outer) <= tol.length() || abs(inner) <= tol.length()) return {base};
  T h2 = c1.radius * c1.radius - along * along;
  if (h2 < T(0)) h2 = T(0);
  T h = sqrt(h2);
  Point<T> perp = {-u.y, u.x};
  std::vector<Point<T>> out = {base - h * perp, base + h * perp};
  if (lex_less(out[1], out[0])) std::swap(out[0], out[1]);
  return out;
}

/// Circle through three points.
template <typename T>
Circle<T> circle_through(const Point<T>& p, const Point<T>& q, const Point<T>& r, const Tolerance<T>& tol) {
  using std::abs;
  Point<T> u = q - p;
  Point<T> v = r - p;
  T det = T(2) * cross(u, v);
  if (!(abs(det) > T(2) * tol.area())) {
    throw GeometryError(ErrorKind::DegenerateInput, "circle through collinear points");
  }
  T uu = dot(u, u);
  T vv = dot(v, v);
  Point<T> o = {(v.y * uu - u.y * vv) / det, (u.x * vv - v.x * uu) / det};
  return {p + o, norm(o)};
}

/// Point of contact of a circle with a tangent line (the foot of the center).
template <typename T>
Point<T> touch_point(const Circle<T>& c, const Line<T>& l) {
  return foot(c.center, l);
}

/// Point of contact of two tangent circles (on the line of centers).
template <typename T>
Point<T> touch_point(const Circle<T>& c1, const Circle<T>& c2, const Tolerance<T>& tol) {
  using std::abs;
  Point<T> delta = c2.center - c1.center;
  T d = norm(delta);
  if (d <= tol.length()) {
    throw GeometryError(ErrorKind::DegenerateInput, "concentric circles have no contact point");
  }
  Point<T> u = delta / d;
  // External tangency: contact toward c2; internal: on the far side of the smaller circle.
  if (abs(d - (c1.radius + c2.radius)) <= abs(d - abs(c1.radius - c2.radius))) {
    return c1.center + c1.radius * u;
  }
  return c1.radius >= c2.radius ? c1.center + c1.radius * u : c1.center - c1.radius * u;
}

// ------------------------------------------------------------------
// Measurements
// ------------------------------------------------------------------

template <typename T>
inline T signed_area(const Point<T>& p, const Point<T>& q, const Point<T>& r) {
  return cross(q - p, r - p) / T(2);
}

/// Unsigned area of a simple polygon given in boundary order.
template <typename T>
T polygon_area(const std::vector<Point<T>>& pts) {
  using std::abs;
  T acc = T(0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    acc += cross(pts[i], pts[(i + 1) % pts.size()]);
  }
  return abs(acc) / T(2);
}

/// Angle PQR at vertex Q, in radians, within [0, pi].
template <typename T>
T angle(const Point<T>& p, const Point<T>& q, const Point<T>& r, const Tolerance<T>& tol) {
  using std::atan2;
  using std::abs;
  Point<T> u = p - q;
  Point<T> v = r - q;
  if (!(norm(u) > tol.length()) || !(norm(v) > tol.length())) {
    throw GeometryError(ErrorKind::DegenerateInput, "angle with a zero-length arm");
  }
  return atan2(abs(cross(u, v)), dot(u, v));
}

// ------------------------------------------------------------------
// Residuals and predicates
// ------------------------------------------------------------------
//
// Every residual is dimensionless: lengths are divided by the scale, areas by
// the scale squared. A predicate holds iff its residual is <= tol.eps.

namespace residual {

template <typename T>
T collinear(const Point<T>& p, const Point<T>& q, const Point<T>& r, const Tolerance<T>& tol) {
  using std::abs;
  return abs(cross(q - p, r - p)) / (tol.scale * tol.scale);
}

template <typename T>
T concurrent(const Line<T>& l1, const Line<T>& l2, const Line<T>& l3, const Tolerance<T>& tol) {
  using std::abs;
  T c1 = l1.c / tol.scale;
  T c2 = l2.c / tol.scale;
  T c3 = l3.c / tol.scale;
  return abs(l1.a * (l2.b * c3 - l3.b * c2) - l1.b * (l2.a * c3 - l3.a * c2) + c1 * (l2.a * l3.b - l3.a * l2.b));
}

template <typename T>
T parallel(const Line<T>& l1, const Line<T>& l2) {
  using std::abs;
  return abs(l1.a * l2.b - l2.a * l1.b);
}

template <typename T>
T perpendicular(const Line<T>& l1, const Line<T>& l2) {
  using std::abs;
  return abs(l1.a * l2.a + l1.b * l2.b);
}

template <typename T>
T on_line(const Point<T>& p, const Line<T>& l, const Tolerance<T>& tol) {
  using std::abs;
  return abs(l.eval(p)) / tol.scale;
}

template <typename T>
T on_circle(const Point<T>& p, const Circle<T>& c, const Tolerance<T>& tol) {
  using std::abs;
  return abs(dist(p, c.center) - c.radius) / tol.scale;
}

template <typename T>
T tangent(const Circle<T>& c, const Line<T>& l, const Tolerance<T>& tol) {
  using std::abs;
  return abs(abs(l.eval(c.center)) - c.radius) / tol.scale;
}

template <typename T>
T tangent(const Circle<T>& c1, const Circle<T>& c2, const Tolerance<T>& tol) {
  using std::abs;
  using std::min;
  T d = dist(c1.center, c2.center);
  T ext = abs(d - (c1.radius + c2.radius));
  T inn = abs(d - abs(c1.radius - c2.radius));
  return (ext < inn ? ext : inn) / tol.scale;
}

template <typename T>
T coincide(const Point<T>& p, const Point<T>& q, const Tolerance<T>& tol) {
  return dist(p, q) / tol.scale;
}

}  // namespace residual

template <typename T>
bool collinear(const Point<T>& p, const Point<T>& q, const Point<T>& r, const Tolerance<T>& tol) {
  return residual::collinear(p, q, r, tol) <= T(tol.eps);
}

template <typename T>
bool concurrent(const Line<T>& l1, const Line<T>& l2, const Line<T>& l3, const Tolerance<T>& tol) {
  return residual::concurrent(l1, l2, l3, tol) <= T(tol.eps);
}

template <typename T>
bool is_parallel(const Line<T>& l1, const Line<T>& l2, const Tolerance<T>& tol) {
  return residual::parallel(l1, l2) <= T(tol.eps);
}

template <typename T>
bool is_perpendicular(const Line<T>& l1, const Line<T>& l2, const Tolerance<T>& tol) {
  return residual::perpendicular(l1, l2) <= T(tol.eps);
}

template <typename T>
bool on(const Point<T>& p, const Line<T>& l, const Tolerance<T>& tol) {
  return residual::on_line(p, l, tol) <= T(tol.eps);
}

template <typename T>
bool on(const Point<T>& p, const Circle<T>& c, const Tolerance<T>& tol) {
  return residual::on_circle(p, c, tol) <= T(tol.eps);
}

template <typename T>
bool tangent(const Circle<T>& c, const Line<T>& l, const Tolerance<T>& tol) {
  return residual::tangent(c, l, tol) <= T(tol.eps);
}

template <typename T>
bool tangent(const Circle<T>& c1, const Circle<T>& c2, const Tolerance<T>& tol) {
  return residual::tangent(c1, c2, tol) <= T(tol.eps);
}

/// Re-evaluates a predicate's residual at confirm precision from fast inputs.
/// Inputs that are exactly representable (grid points, exact test data) keep
/// their exact residual; rounded constructions do not pass this stage, which is
/// why figures are reconstructed at confirm precision before confirmation.
template <typename Residual, typename... Args>
bool dual_check(const TolerancePolicy& policy, const Fast& scale, Residual&& residual_fn, const Args&... args) {
  Tolerance<Fast> fast_tol(scale, policy);
  Tolerance<Confirm> confirm_tol(Confirm(scale), policy);
  if (!(residual_fn(fast_tol, args...) <= Fast(fast_tol.eps))) return false;
  return residual_fn(confirm_tol, args.template cast<Confirm>()...) <= Confirm(confirm_tol.eps);
}

}  // namespace gex
