#pragma once

#include "gex/apollonius.hpp"
#include "gex/kernel.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace gex {

enum class Vertex { A = 0, B = 1, C = 2 };

/// Sides named by the vertices they join; side BC is opposite vertex A.
enum class Side { BC = 0, CA = 1, AB = 2 };

inline Vertex opposite(Side s) { return static_cast<Vertex>(static_cast<int>(s)); }
inline Side opposite(Vertex v) { return static_cast<Side>(static_cast<int>(v)); }

enum class CenterKind {
  Incenter,         // X1
  Centroid,         // X2
  Circumcenter,     // X3
  Orthocenter,      // X4
  NinePointCenter,  // X5
  Symmedian,        // X6
  Gergonne,         // X7
  Nagel,            // X8
  Mittenpunkt,      // X9
  Spieker,          // X10
  Feuerbach,        // X11
  Insimilicenter,   // X55
};

inline constexpr std::array<CenterKind, 12> kAllCenters = {
    CenterKind::Incenter,    CenterKind::Centroid, CenterKind::Circumcenter, CenterKind::Orthocenter,
    CenterKind::NinePointCenter, CenterKind::Symmedian, CenterKind::Gergonne, CenterKind::Nagel,
    CenterKind::Mittenpunkt, CenterKind::Spieker,  CenterKind::Feuerbach,    CenterKind::Insimilicenter};

inline int etc_index(CenterKind k) {
  static constexpr int idx[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 55};
  return idx[static_cast<int>(k)];
}

inline std::string_view center_name(CenterKind k) {
  static constexpr std::string_view names[] = {
      "incenter", "centroid", "circumcenter", "orthocenter", "ninepointcenter", "symmedian",
      "gergonne", "nagel",    "mittenpunkt",  "spieker",     "feuerbach",       "insimilicenter"};
  return names[static_cast<int>(k)];
}

inline std::optional<CenterKind> center_from_name(std::string_view name) {
  for (CenterKind k : kAllCenters)
    if (center_name(k) == name) return k;
  if (name == "x55") return CenterKind::Insimilicenter;
  return std::nullopt;
}

template <typename T>
struct Barycentric {
  T u{}, v{}, w{};

  Barycentric normalized() const {
    T s = u + v + w;
    return {u / s, v / s, w / s};
  }
};

template <typename T>
struct Segment {
  Point<T> from;
  Point<T> to;
};

template <typename T>
class Triangle {
 public:
  Triangle(Point<T> A, Point<T> B, Point<T> C) : v_{A, B, C} {
    using std::abs;
    using std::sqrt;
    side_[0] = dist(B, C);
    side_[1] = dist(C, A);
    side_[2] = dist(A, B);
    scale_ = side_[0];
    if (side_[1] > scale_) scale_ = side_[1];
    if (side_[2] > scale_) scale_ = side_[2];
    s_ = (side_[0] + side_[1] + side_[2]) / T(2);
    T margin = s_ - scale_;  // smallest of s-a, s-b, s-c
    if (!(scale_ > T(0)) || !(margin > T(PrecisionTraits<T>::kDefaultEps) * scale_)) {
      throw GeometryError(ErrorKind::DegenerateInput, "triangle inequality violated");
    }
    K_ = abs(signed_area(A, B, C));
    if (!(K_ > T(0))) throw GeometryError(ErrorKind::DegenerateInput, "triangle has zero area");
  }

  /// Triangle with A=(0,0), B=(c,0) and C above AB, from side lengths.
  static Triangle from_sides(const T& a, const T& b, const T& c) {
    using std::sqrt;
    if (!(a > T(0) && b > T(0) && c > T(0)) || !(a < b + c && b < c + a && c < a + b)) {
      throw GeometryError(ErrorKind::DegenerateInput, "side lengths violate the triangle inequality");
    }
    T x = (b * b + c * c - a * a) / (T(2) * c);
    T y2 = b * b - x * x;
    if (!(y2 > T(0))) throw GeometryError(ErrorKind::DegenerateInput, "degenerate side lengths");
    return Triangle({T(0), T(0)}, {c, T(0)}, {x, sqrt(y2)});
  }

  const Point<T>& A() const { return v_[0]; }
  const Point<T>& B() const { return v_[1]; }
  const Point<T>& C() const { return v_[2]; }
  const Point<T>& vertex(Vertex v) const { return v_[static_cast<int>(v)]; }

  const T& a() const { return side_[0]; }
  const T& b() const { return side_[1]; }
  const T& c() const { return side_[2]; }
  const T& side(Side s) const { return side_[static_cast<int>(s)]; }
  const T& s() const { return s_; }
  const T& area() const { return K_; }
  /// Largest side; the figure scale used to relativize tolerances.
  const T& scale() const { return scale_; }

  Tolerance<T> tolerance(const TolerancePolicy& policy = {}) const { return {scale_, policy}; }

  Point<T> from_barycentric(const Barycentric<T>& w) const {
    using std::abs;
    T sum = w.u + w.v + w.w;
    if (!(abs(sum) > T(1e-300))) throw GeometryError(ErrorKind::DegenerateInput, "barycentric weights sum to zero");
    return {(w.u * v_[0].x + w.v * v_[1].x + w.w * v_[2].x) / sum,
            (w.u * v_[0].y + w.v * v_[1].y + w.w * v_[2].y) / sum};
  }

 private:
  std::array<Point<T>, 3> v_;
  std::array<T, 3> side_;
  T s_, K_, scale_;
};

/// Barycentric weights of a named center. Feuerbach has no entry here; it is
/// constructed geometrically.
template <typename T>
Barycentric<T> barycentrics(CenterKind kind, const Triangle<T>& t) {
  const T &a = t.a(), &b = t.b(), &c = t.c(), &s = t.s();
  const T a2 = a * a, b2 = b * b, c2 = c * c;
  switch (kind) {
    case CenterKind::Incenter: return {a, b, c};
    case CenterKind::Centroid: return {T(1), T(1), T(1)};
    case CenterKind::Circumcenter:
      return {a2 * (b2 + c2 - a2), b2 * (c2 + a2 - b2), c2 * (a2 + b2 - c2)};
    case CenterKind::Orthocenter:
      return {(a2 + b2 - c2) * (a2 - b2 + c2), (b2 + c2 - a2) * (b2 - c2 + a2), (c2 + a2 - b2) * (c2 - a2 + b2)};
    case CenterKind::NinePointCenter:
      return {a2 * (b2 + c2) - (b2 - c2) * (b2 - c2), b2 * (c2 + a2) - (c2 - a2) * (c2 - a2),
              c2 * (a2 + b2) - (a2 - b2) * (a2 - b2)};
    case CenterKind::Symmedian: return {a2, b2, c2};
    case CenterKind::Gergonne:
      return {(s - b) * (s - c), (s - c) * (s - a), (s - a) * (s - b)};  // ∝ 1/(s-a) : 1/(s-b) : 1/(s-c)
    case CenterKind::Nagel: return {s - a, s - b, s - c};
    case CenterKind::Mittenpunkt: return {a * (s - a), b * (s - b), c * (s - c)};
    case CenterKind::Spieker: return {b + c, c + a, a + b};
    case CenterKind::Insimilicenter: return {a2 * (s - a), b2 * (s - b), c2 * (s - c)};
    case CenterKind::Feuerbach: break;
  }
  throw GeometryError(ErrorKind::DegenerateInput, "center has no barycentric table entry");
}

template <typename T>
Circle<T> incircle(const Triangle<T>& t) {
  return {t.from_barycentric(barycentrics(CenterKind::Incenter, t)), t.area() / t.s()};
}

template <typename T>
Circle<T> circumcircle(const Triangle<T>& t) {
  return {t.from_barycentric(barycentrics(CenterKind::Circumcenter, t)), t.a() * t.b() * t.c() / (T(4) * t.area())};
}

template <typename T>
Circle<T> nine_point_circle(const Triangle<T>& t) {
  return {t.from_barycentric(barycentrics(CenterKind::NinePointCenter, t)),
          t.a() * t.b() * t.c() / (T(8) * t.area())};
}

template <typename T>
Point<T> excenter(const Triangle<T>& t, Vertex v) {
  Barycentric<T> w{t.a(), t.b(), t.c()};
  switch (v) {
    case Vertex::A: w.u = -w.u; break;
    case Vertex::B: w.v = -w.v; break;
    case Vertex::C: w.w = -w.w; break;
  }
  return t.from_barycentric(w);
}

template <typename T>
Circle<T> excircle(const Triangle<T>& t, Vertex v) {
  return {excenter(t, v), t.area() / (t.s() - t.side(opposite(v)))};
}

template <typename T>
Point<T> center(CenterKind kind, const Triangle<T>& t) {
  if (kind == CenterKind::Feuerbach) {
    // Contact point of the incircle with the nine-point circle.
    Circle<T> in = incircle(t);
    Point<T> n = t.from_barycentric(barycentrics(CenterKind::NinePointCenter, t));
    Point<T> d = n - in.center;
    T len = norm(d);
    if (!(len > t.tolerance().length())) {
      throw GeometryError(ErrorKind::DegenerateInput, "Feuerbach point undefined (incircle is the nine-point circle)");
    }
    // Internal tangency: the contact lies on ray N->I beyond I.
    return in.center - (in.radius / len) * d;
  }
  return t.from_barycentric(barycentrics(kind, t));
}

/// Incircle contact point on the given side; on BC it lies at distance s-b from B.
template <typename T>
Point<T> touch_point(const Triangle<T>& t, Side side) {
  switch (side) {
    case Side::BC: return t.B() + ((t.s() - t.b()) / t.a()) * (t.C() - t.B());
    case Side::CA: return t.C() + ((t.s() - t.c()) / t.b()) * (t.A() - t.C());
    case Side::AB: return t.A() + ((t.s() - t.a()) / t.c()) * (t.B() - t.A());
  }
  return {};
}

enum class CevianKind { Gergonne, Nagel, Median, Bisector, Symmedian, ThroughCenter };

/// Cevian from a vertex to its trace on the opposite side line. For a center
/// with barycentrics (u:v:w), the A-trace is (0:v:w).
template <typename T>
Segment<T> cevian(const Triangle<T>& t, Vertex v, CevianKind kind, CenterKind through = CenterKind::Centroid) {
  using std::abs;
  Barycentric<T> w;
  switch (kind) {
    case CevianKind::Gergonne: w = barycentrics(CenterKind::Gergonne, t); break;
    case CevianKind::Nagel: w = barycentrics(CenterKind::Nagel, t); break;
    case CevianKind::Median: w = barycentrics(CenterKind::Centroid, t); break;
    case CevianKind::Bisector: w = barycentrics(CenterKind::Incenter, t); break;
    case CevianKind::Symmedian: w = barycentrics(CenterKind::Symmedian, t); break;
    case CevianKind::ThroughCenter:
      if (through == CenterKind::Feuerbach) {
        // Trace through an arbitrary point: intersect the vertex-point line with the side.
        Point<T> p = center(through, t);
        Tolerance<T> tol = t.tolerance();
        const Point<T>& P = t.vertex(v);
        int i = static_cast<int>(v);
        const Point<T>& Q = t.vertex(static_cast<Vertex>((i + 1) % 3));
        const Point<T>& R = t.vertex(static_cast<Vertex>((i + 2) % 3));
        return {P, intersect_ll(line_through(P, p, tol), line_through(Q, R, tol), tol)};
      }
      w = barycentrics(through, t);
      break;
  }
  switch (v) {
    case Vertex::A: w.u = T(0); break;
    case Vertex::B: w.v = T(0); break;
    case Vertex::C: w.w = T(0); break;
  }
  T sum = w.u + w.v + w.w;
  T mag = abs(w.u) + abs(w.v) + abs(w.w);
  if (!(abs(sum) > T(PrecisionTraits<T>::kDefaultEps) * mag)) {
    throw GeometryError(ErrorKind::DegenerateInput, "cevian is parallel to the opposite side");
  }
  return {t.vertex(v), t.from_barycentric(w)};
}

template <typename T>
struct MixtilinearIncircle {
  Circle<T> circle;
  Point<T> touch_on_circumcircle;
  /// Contact points with the two sides through the vertex, in the order
  /// (next vertex side, previous vertex side): for A these are on AB then AC.
  std::array<Point<T>, 2> touch_on_sides;
};

/// Circle tangent to the two sides at a vertex and internally tangent to the
/// circumcircle, solved as an LLC tangency problem.
template <typename T>
MixtilinearIncircle<T> mixtilinear_incircle(const Triangle<T>& t, Vertex v) {
  int i = static_cast<int>(v);
  const Point<T>& P = t.vertex(v);
  const Point<T>& Q = t.vertex(static_cast<Vertex>((i + 1) % 3));
  const Point<T>& R = t.vertex(static_cast<Vertex>((i + 2) % 3));
  Tolerance<T> tol = t.tolerance();
  Line<T> pq = line_through(P, Q, tol);
  Line<T> pr = line_through(P, R, tol);
  Circle<T> cc = circumcircle(t);
  TangencyProblem<T> prob{{pq, pr, cc}};
  auto sols = solve(prob, tol);
  auto chosen = select(sols, [&](const TangencySolution<T>& s) {
    const Point<T>& o = s.circle.center;
    bool internal = s.circle.radius < cc.radius &&
                    residual::tangent(s.circle, cc, tol) <= T(tol.eps) &&
                    dist(o, cc.center) < cc.radius;
    bool in_angle = pq.eval(o) * pq.eval(R) > T(0) && pr.eval(o) * pr.eval(Q) > T(0);
    return internal && in_angle;
  });
  return {chosen.circle, chosen.touch_points[2], {chosen.touch_points[0], chosen.touch_points[1]}};
}

}  // namespace gex
