#pragma once

#include "gex/triangle.hpp"

#include <array>
#include <utility>

namespace gex::formulas {

/// Side lengths a = |BC|, b = |CA|, c = |AB| of a labeled triangle.
template <typename T>
struct SideTriple {
  T a{}, b{}, c{};

  SideTriple() = default;
  SideTriple(T a_, T b_, T c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
    if (!(a > T(0) && b > T(0) && c > T(0)) || !(a < b + c && b < c + a && c < a + b)) {
      throw GeometryError(ErrorKind::DegenerateInput, "side triple violates the triangle inequality");
    }
  }

  const T& side(Vertex opposite_vertex) const {
    switch (opposite_vertex) {
      case Vertex::A: return a;
      case Vertex::B: return b;
      case Vertex::C: return c;
    }
    return a;
  }

  T s() const { return (a + b + c) / T(2); }

  /// a^2 + b^2 + c^2 - 2ab - 2bc - 2ca, negative for every valid triangle.
  T Q() const { return a * a + b * b + c * c - T(2) * (a * b + b * c + c * a); }

  T K() const {
    using std::sqrt;
    T sp = s();
    return sqrt(sp * (sp - a) * (sp - b) * (sp - c));
  }
};

/// Role assignment: roles[0] is the vertex playing "A" in a formula stated for
/// A,B,C; roles[1] plays "B"; roles[2] plays "C". Any permutation is allowed,
/// including orientation-reversing ones.
using Roles = std::array<Vertex, 3>;

inline Roles roles_for(Vertex first, Vertex second) {
  int f = static_cast<int>(first);
  int s = static_cast<int>(second);
  if (f == s) throw GeometryError(ErrorKind::DegenerateInput, "role vertices must differ");
  return {first, second, static_cast<Vertex>(3 - f - s)};
}

/// Cyclic roles starting at the given vertex: A -> (A,B,C), B -> (B,C,A), C -> (C,A,B).
inline Roles cyclic_roles(Vertex first) {
  int f = static_cast<int>(first);
  return {first, static_cast<Vertex>((f + 1) % 3), static_cast<Vertex>((f + 2) % 3)};
}

template <typename T>
SideTriple<T> relabel(const SideTriple<T>& t, const Roles& roles) {
  SideTriple<T> out;
  out.a = t.side(roles[0]);
  out.b = t.side(roles[1]);
  out.c = t.side(roles[2]);
  return out;
}

template <typename T>
void require_nondegenerate(const SideTriple<T>& t) {
  if (!(t.Q() < T(0))) throw GeometryError(ErrorKind::DegenerateInput, "Q must be negative");
}

/// Distance from a vertex to the Gergonne point.
template <typename T>
T spoke_distance(const SideTriple<T>& t0, Vertex v) {
  using std::abs;
  using std::sqrt;
  SideTriple<T> t = relabel(t0, cyclic_roles(v));
  require_nondegenerate(t);
  const T &a = t.a, &b = t.b, &c = t.c;
  T u = b + c - a;
  T inner = a * (a + b + c) - T(2) * (b - c) * (b - c);
  return sqrt(a * u * u * u * inner) / abs(t.Q());
}

/// DV1 / DV2 for the Gergonne point D, from the two-vertex radical expression.
template <typename T>
T tripolar_ratio(const SideTriple<T>& t0, Vertex v1, Vertex v2) {
  using std::sqrt;
  int i = static_cast<int>(v1);
  int j = static_cast<int>(v2);
  if (i == j) return T(1);
  // The expression is stated for the cyclic successor pair (A,B).
  if ((i + 1) % 3 != j) return T(1) / tripolar_ratio(t0, v2, v1);
  SideTriple<T> t = relabel(t0, cyclic_roles(v1));
  require_nondegenerate(t);
  const T &a = t.a, &b = t.b, &c = t.c;
  T num = a * (b + c - a) * (a * a + a * b - T(2) * b * b + a * c + T(4) * b * c - T(2) * c * c);
  T den = b * (c + a - b) * (b * b + b * c - T(2) * c * c + b * a + T(4) * c * a - T(2) * a * a);
  return (b + c - a) / (c + a - b) * sqrt(num / den);
}

/// [BDC] / [CDA] = (c+a-b)/(b+c-a).
template <typename T>
T barycentric_area_ratio(const SideTriple<T>& t) {
  require_nondegenerate(t);
  return (t.c + t.a - t.b) / (t.b + t.c - t.a);
}

/// Area of the sub-triangle opposite the given vertex, e.g. [BCD] for A.
template <typename T>
T gergonne_subarea(const SideTriple<T>& t0, Vertex v = Vertex::A) {
  SideTriple<T> t = relabel(t0, cyclic_roles(v));
  require_nondegenerate(t);
  const T &a = t.a, &b = t.b, &c = t.c;
  return (a + b - c) * (a - b + c) / (-t.Q()) * t.K();
}

/// Lengths from the two endpoints of the side opposite the vertex to the
/// Gergonne trace: for A, (BE, CE) = (s-b, s-c).
template <typename T>
std::pair<T, T> trace_lengths(const SideTriple<T>& t0, Vertex v) {
  SideTriple<T> t = relabel(t0, cyclic_roles(v));
  T s = t.s();
  return {s - t.b, s - t.c};
}

/// AD / DE along the Gergonne cevian AE.
template <typename T>
T cevian_division(const SideTriple<T>& t0, Vertex v) {
  SideTriple<T> t = relabel(t0, cyclic_roles(v));
  T s = t.s();
  return t.a * (s - t.a) / ((s - t.b) * (s - t.c));
}

/// Length of the Gergonne cevian from the vertex.
template <typename T>
T cevian_length(const SideTriple<T>& t0, Vertex v) {
  using std::sqrt;
  SideTriple<T> t = relabel(t0, cyclic_roles(v));
  T s = t.s();
  T d = t.b - t.c;
  return sqrt((s - t.a) * (t.a * s - d * d) / t.a);
}

namespace detail {

/// Roles for a parallel through D to `parallel_side`, meeting `meet_side`:
/// the base formulas are stated for parallel to BC meeting CA.
inline Roles pararadius_roles(Side parallel_side, Side meet_side) {
  return roles_for(opposite(parallel_side), opposite(meet_side));
}

}  // namespace detail

/// Length from the Gergonne point along the parallel to `parallel_side` until
/// it meets `meet_side`.
template <typename T>
T pararadius(const SideTriple<T>& t0, Side parallel_side, Side meet_side) {
  SideTriple<T> t = relabel(t0, detail::pararadius_roles(parallel_side, meet_side));
  require_nondegenerate(t);
  return -t.a * (t.a + t.b - t.c) * (t.b + t.c - t.a) / t.Q();
}

/// AE / DE where E is the pararadius endpoint and A the apex opposite the parallel side.
template <typename T>
T parallel_ratio(const SideTriple<T>& t0, Side parallel_side, Side meet_side) {
  SideTriple<T> t = relabel(t0, detail::pararadius_roles(parallel_side, meet_side));
  return t.b / (t.s() - t.c);
}

/// (AE, CE): the split of the met side at the pararadius endpoint E, with A the
/// apex and C the other endpoint of the met side.
template <typename T>
std::pair<T, T> pararadius_split(const SideTriple<T>& t0, Side parallel_side, Side meet_side) {
  SideTriple<T> t = relabel(t0, detail::pararadius_roles(parallel_side, meet_side));
  require_nondegenerate(t);
  const T &a = t.a, &b = t.b, &c = t.c;
  T q = t.Q();
  return {T(2) * a * b * (a - b - c) / q, b * (b * b + c * c - a * a - T(2) * b * c) / q};
}

/// Length of the chord through the Gergonne point parallel to the side.
template <typename T>
T parachord(const SideTriple<T>& t0, Side side) {
  Vertex apex = opposite(side);
  SideTriple<T> t = relabel(t0, cyclic_roles(apex));
  require_nondegenerate(t);
  return T(2) * t.a * t.a * (t.a - t.b - t.c) / t.Q();
}

/// Distance from the Gergonne point to the side.
template <typename T>
T apothem(const SideTriple<T>& t0, Side side) {
  SideTriple<T> t = relabel(t0, cyclic_roles(opposite(side)));
  require_nondegenerate(t);
  T s = t.s();
  return T(8) * (s - t.b) * (s - t.c) * t.K() / (t.a * (-t.Q()));
}

/// Ratio of the distances from the Gergonne point to side1 and side2.
template <typename T>
T trilinear_ratio(const SideTriple<T>& t0, Side side1, Side side2) {
  if (side1 == side2) return T(1);
  SideTriple<T> t = relabel(t0, roles_for(opposite(side1), opposite(side2)));
  require_nondegenerate(t);
  return t.b * (t.c + t.a - t.b) / (t.a * (t.b + t.c - t.a));
}

/// Left side minus one of (s-a)/(s-b)*n/m + (s-a)/(s-c)*q/p = 1 for a chord
/// through the Gergonne point meeting AB at E (AE = m, EB = n) and AC at F
/// (AF = p, FC = q).
template <typename T>
T gergonne_chord_residual(const SideTriple<T>& t, const T& m, const T& n, const T& p, const T& q) {
  if (!(m > T(0) && p > T(0))) throw GeometryError(ErrorKind::DegenerateInput, "chord passes through the vertex");
  T s = t.s();
  return (s - t.a) / (s - t.b) * (n / m) + (s - t.a) / (s - t.c) * (q / p) - T(1);
}

/// Coordinate realization used to cross-check the formulas: A=(0,0), B=(c,0),
/// C above AB by the law of cosines.
template <typename T>
Triangle<T> realize(const SideTriple<T>& t) {
  return Triangle<T>::from_sides(t.a, t.b, t.c);
}

}  // namespace gex::formulas
