#pragma once

#include "gex/dsl/constraints.hpp"
#include "gex/formulas.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace gex {

struct SamplerConfig {
  /// Smallest allowed s - side on the normalized shape (a + b + c = 3).
  double min_margin = 0.02;
  /// Random starts before giving up with Infeasible.
  int max_starts = 10000;
  /// Minimum distance in (a, b) between samples of a family with free parameters.
  double min_separation = 1e-3;
};

/// One random realization: a normalized shape plus the similarity that places it.
struct TriangleSample {
  /// Normalized so that a + b + c = 3, solved to confirm precision.
  formulas::SideTriple<Confirm> shape;
  double rotation = 0;
  double scale = 1;
  double tx = 0, ty = 0;
  /// Relative constraint residuals at fast precision.
  std::vector<double> residuals;

  /// Coordinates at precision T: A at the origin, B on the x-axis, C above,
  /// then rotated, scaled, translated.
  template <typename T>
  Triangle<T> realize() const {
    using std::cos;
    using std::sin;
    T a = real_cast<T>(shape.a), b = real_cast<T>(shape.b), c = real_cast<T>(shape.c);
    Triangle<T> base = Triangle<T>::from_sides(a, b, c);
    T cr = cos(T(rotation)), sr = sin(T(rotation)), k(scale);
    auto place = [&](const Point<T>& p) {
      return Point<T>{k * (cr * p.x - sr * p.y) + T(tx), k * (sr * p.x + cr * p.y) + T(ty)};
    };
    return Triangle<T>(place(base.A()), place(base.B()), place(base.C()));
  }
};

namespace detail {

template <typename T>
struct ShapeSystem {
  const dsl::ConstraintSet& cs;

  /// Constraint values at (a, b, 3 - a - b); false when the point is not a triangle.
  bool values(const T& a, const T& b, std::vector<T>& out) const {
    T c = T(3) - a - b;
    if (!(a > T(0) && b > T(0) && c > T(0) && a < b + c && b < c + a && c < a + b)) return false;
    formulas::SideTriple<T> t;
    t.a = a;
    t.b = b;
    t.c = c;
    out = dsl::constraint_values(cs, t);
    for (const auto& v : out)
      if (!is_finite(v)) return false;
    return true;
  }
};

template <typename T>
T sq_norm(const std::vector<T>& v) {
  T s(0);
  for (const auto& x : v) s += x * x;
  return s;
}

/// Damped Newton on (a, b) with minimum-norm steps; returns false on failure.
template <typename T>
bool newton(const dsl::ConstraintSet& cs, T& a, T& b, const T& h, const T& target, int max_iter) {
  using std::abs;
  ShapeSystem<T> sys{cs};
  std::vector<T> f, fa, fb, fa2, fb2;
  if (!sys.values(a, b, f)) return false;
  const std::size_t m = f.size();
  for (int it = 0; it < max_iter; ++it) {
    T fn = sq_norm(f);
    if (fn <= target * target) return true;
    if (!sys.values(a + h, b, fa) || !sys.values(a - h, b, fa2) || !sys.values(a, b + h, fb) ||
        !sys.values(a, b - h, fb2))
      return false;
    // Jacobian rows (df/da, df/db) by central differences.
    std::vector<std::array<T, 2>> J(m);
    for (std::size_t i = 0; i < m; ++i) J[i] = {(fa[i] - fa2[i]) / (T(2) * h), (fb[i] - fb2[i]) / (T(2) * h)};
    T da(0), db(0);
    if (m == 1) {
      T g = J[0][0] * J[0][0] + J[0][1] * J[0][1];
      if (!(g > T(0))) return false;
      da = -f[0] * J[0][0] / g;
      db = -f[0] * J[0][1] / g;
    } else {
      T det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      if (!(abs(det) > T(0))) return false;
      da = (-f[0] * J[1][1] + f[1] * J[0][1]) / det;
      db = (-f[1] * J[0][0] + f[0] * J[1][0]) / det;
    }
    T step(1);
    bool moved = false;
    for (int k = 0; k < 30; ++k, step /= T(2)) {
      T na = a + step * da, nb = b + step * db;
      std::vector<T> nf;
      if (sys.values(na, nb, nf) && sq_norm(nf) < fn) {
        a = na;
        b = nb;
        f = std::move(nf);
        moved = true;
        break;
      }
    }
    if (!moved) return sq_norm(f) <= target * target;
  }
  return sq_norm(f) <= target * target;
}

inline bool margin_ok(double a, double b, double margin) {
  double c = 3 - a - b;
  return 1.5 - a >= margin && 1.5 - b >= margin && 1.5 - c >= margin;
}

}  // namespace detail

/// Distinct random triangles satisfying the constraint set, deterministic for a
/// fixed seed. A shape determined up to finitely many solutions is repeated
/// with fresh similarity placements.
inline std::vector<TriangleSample> sample(const dsl::ConstraintSet& cs, int n, std::uint64_t seed,
                                          const SamplerConfig& cfg = {}) {
  using std::abs;
  if (cs.equations.size() > 2) {
    throw GeometryError(ErrorKind::OverConstrained, "at most two shape constraints are supported");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const bool discrete = cs.equations.size() == 2;

  std::vector<formulas::SideTriple<Confirm>> shapes;
  auto separated = [&](const Confirm& a, const Confirm& b) {
    for (const auto& s : shapes) {
      double da = to_double(s.a - a), db = to_double(s.b - b);
      if (std::hypot(da, db) < (discrete ? 1e-9 : cfg.min_separation)) return false;
    }
    return true;
  };

  int starts = 0;
  int stale = 0;
  const std::size_t wanted = discrete ? 0 : static_cast<std::size_t>(n);
  while (starts < cfg.max_starts) {
    if (!discrete && shapes.size() >= wanted) break;
    // Discrete families: stop once new starts keep rediscovering known shapes.
    if (discrete && !shapes.empty() && stale >= 200) break;
    ++starts;
    double a0 = 1.5 * u01(rng), b0 = 1.5 * u01(rng);
    if (!detail::margin_ok(a0, b0, 0)) continue;
    double a = a0, b = b0;
    if (!cs.empty() && !detail::newton<double>(cs, a, b, 1e-7, 1e-13, 60)) continue;
    if (!detail::margin_ok(a, b, cfg.min_margin)) continue;
    Confirm ca(a), cb(b);
    if (!cs.empty() && !detail::newton<Confirm>(cs, ca, cb, Confirm("1e-20"), Confirm("1e-44"), 20)) continue;
    if (!separated(ca, cb)) {
      ++stale;
      continue;
    }
    stale = 0;
    formulas::SideTriple<Confirm> t;
    t.a = ca;
    t.b = cb;
    t.c = Confirm(3) - ca - cb;
    shapes.push_back(t);
  }
  if (shapes.empty()) throw GeometryError(ErrorKind::Infeasible, "no triangle satisfies the constraints");
  if (!discrete && shapes.size() < wanted) {
    throw GeometryError(ErrorKind::Infeasible, "found only " + std::to_string(shapes.size()) + " distinct shapes");
  }
  // Discrete solutions are visited in a fixed order.
  std::sort(shapes.begin(), shapes.end(), [](const auto& x, const auto& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });

  std::vector<TriangleSample> out;
  for (int i = 0; i < n; ++i) {
    TriangleSample s;
    s.shape = shapes[static_cast<std::size_t>(i) % shapes.size()];
    s.rotation = 2 * pi<double>() * u01(rng);
    s.scale = 0.5 + 1.5 * u01(rng);
    s.tx = 2 * u01(rng) - 1;
    s.ty = 2 * u01(rng) - 1;
    formulas::SideTriple<double> d;
    d.a = to_double(s.shape.a);
    d.b = to_double(s.shape.b);
    d.c = to_double(s.shape.c);
    s.residuals = cs.empty() ? std::vector<double>{} : dsl::constraint_residuals(cs, d);
    out.push_back(std::move(s));
  }
  return out;
}

/// Moves a triangle's normalized shape by `magnitude` in a seeded random
/// direction of the (a, b) plane, keeping A, the direction of AB and the perimeter.
template <typename T>
Triangle<T> perturb(const Triangle<T>& t, double magnitude, std::uint64_t seed) {
  using std::cos;
  using std::sin;
  T per = t.a() + t.b() + t.c();
  T k = T(3) / per;
  T a = t.a() * k, b = t.b() * k;
  std::mt19937_64 rng(seed);
  double th = 2 * pi<double>() * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  a += T(magnitude * std::cos(th));
  b += T(magnitude * std::sin(th));
  T c = T(3) - a - b;
  if (!(a > T(0) && b > T(0) && c > T(0) && a < b + c && b < c + a && c < a + b)) {
    throw GeometryError(ErrorKind::DegenerateInput, "perturbation leaves the triangle region");
  }
  Triangle<T> base = Triangle<T>::from_sides(a / k, b / k, c / k);
  Point<T> ab = t.B() - t.A();
  T len = norm(ab);
  T cr = ab.x / len, sr = ab.y / len;
  // Keep C on the same side of AB as before.
  T flip = signed_area(t.A(), t.B(), t.C()) > T(0) ? T(1) : T(-1);
  auto place = [&](const Point<T>& p) {
    Point<T> q{p.x, flip * p.y};
    return Point<T>{cr * q.x - sr * q.y + t.A().x, sr * q.x + cr * q.y + t.A().y};
  };
  return Triangle<T>(place(base.A()), place(base.B()), place(base.C()));
}

}  // namespace gex
