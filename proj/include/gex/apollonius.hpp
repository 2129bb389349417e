#pragma once

#include "gex/kernel.hpp"

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace gex {

template <typename T>
using TangencyConstraint = std::variant<Point<T>, Line<T>, Circle<T>>;

template <typename T>
struct TangencyProblem {
  std::array<TangencyConstraint<T>, 3> constraints;
};

template <typename T>
struct TangencySolution {
  Circle<T> circle;
  /// One contact point per Line/Circle constraint, in constraint order.
  std::vector<Point<T>> touch_points;
  /// The Point constraints, in constraint order.
  std::vector<Point<T>> passes_through;
};

/// Family code such as "LLP": constraint kinds sorted as the family list spells them.
template <typename T>
std::string family(const TangencyProblem<T>& p) {
  int np = 0, nl = 0, nc = 0;
  for (const auto& c : p.constraints) {
    if (std::holds_alternative<Point<T>>(c)) ++np;
    else if (std::holds_alternative<Line<T>>(c)) ++nl;
    else ++nc;
  }
  // CLP is the only mixed family with all three kinds.
  if (np == 1 && nl == 1 && nc == 1) return "CLP";
  std::string out;
  if (nl >= np) {
    out.append(nl, 'L');
    out.append(np, 'P');
  } else {
    out.append(np, 'P');
    out.append(nl, 'L');
  }
  out.append(nc, 'C');
  return out;
}

namespace detail {

/// q*(h^2 + k^2 - r^2) + lin . (h,k,r) + k0 = 0
template <typename T>
struct TangencyEquation {
  int quad = 0;
  std::array<T, 3> lin{};
  T k0{};

  T eval(const std::array<T, 3>& x) const {
    T v = lin[0] * x[0] + lin[1] * x[1] + lin[2] * x[2] + k0;
    if (quad) v += x[0] * x[0] + x[1] * x[1] - x[2] * x[2];
    return v;
  }
  std::array<T, 3> grad(const std::array<T, 3>& x) const {
    std::array<T, 3> g = lin;
    if (quad) {
      g[0] += T(2) * x[0];
      g[1] += T(2) * x[1];
      g[2] -= T(2) * x[2];
    }
    return g;
  }
};

template <typename T>
TangencyEquation<T> equation_for(const TangencyConstraint<T>& c, int sign) {
  TangencyEquation<T> e;
  if (const auto* p = std::get_if<Point<T>>(&c)) {
    e.quad = 1;
    e.lin = {T(-2) * p->x, T(-2) * p->y, T(0)};
    e.k0 = p->x * p->x + p->y * p->y;
  } else if (const auto* l = std::get_if<Line<T>>(&c)) {
    // Signed distance of the center equals sign * r.
    e.lin = {l->a, l->b, T(-sign)};
    e.k0 = l->c;
  } else {
    const auto& ci = std::get<Circle<T>>(c);
    // |center - o| = R + sign * r
    e.quad = 1;
    e.lin = {T(-2) * ci.center.x, T(-2) * ci.center.y, T(-2 * sign) * ci.radius};
    e.k0 = ci.center.x * ci.center.x + ci.center.y * ci.center.y - ci.radius * ci.radius;
  }
  return e;
}

template <typename T>
std::array<T, 3> cross3(const std::array<T, 3>& u, const std::array<T, 3>& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

template <typename T>
T dot3(const std::array<T, 3>& u, const std::array<T, 3>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

template <typename T>
bool solve3(std::array<std::array<T, 3>, 3> m, std::array<T, 3> rhs, std::array<T, 3>& out, const T& tiny) {
  using std::abs;
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (abs(m[r][col]) > abs(m[piv][col])) piv = r;
    if (!(abs(m[piv][col]) > tiny)) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      T f = m[r][col] / m[col][col];
      for (int k = col; k < 3; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int i = 0; i < 3; ++i) out[i] = rhs[i] / m[i][i];
  return true;
}

/// Real roots of A t^2 + B t + C = 0 with a relative discriminant cut.
template <typename T>
std::vector<T> quadratic_roots(const T& A, const T& B, const T& C, double rel_eps) {
  using std::abs;
  using std::sqrt;
  T mag = abs(B) + abs(A) + abs(C);
  if (!(mag > T(0))) return {};
  if (abs(A) <= T(rel_eps) * mag) {
    if (abs(B) <= T(rel_eps) * mag) return {};
    return {-C / B};
  }
  T disc = B * B - T(4) * A * C;
  T disc_scale = B * B + abs(T(4) * A * C);
  if (disc < -T(rel_eps) * disc_scale) return {};
  if (abs(disc) <= T(rel_eps) * disc_scale) return {-B / (T(2) * A)};
  T sq = sqrt(disc);
  T q = B >= T(0) ? -(B + sq) / T(2) : -(B - sq) / T(2);
  return {q / A, C / q};
}

}  // namespace detail

/// All real tangent/through circles for a three-constraint problem, ordered by
/// (radius, center.x, center.y). Every emitted circle satisfies its constraints
/// to tol.eps relative to tol.scale.
template <typename T>
std::vector<TangencySolution<T>> solve(const TangencyProblem<T>& problem, const Tolerance<T>& tol) {
  using std::abs;
  using namespace detail;

  // Identical constraints make the problem underdetermined.
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const auto& ci = problem.constraints[i];
      const auto& cj = problem.constraints[j];
      if (ci.index() != cj.index()) continue;
      bool same = false;
      if (auto* p = std::get_if<Point<T>>(&ci)) {
        same = dist(*p, std::get<Point<T>>(cj)) <= tol.length();
      } else if (auto* l = std::get_if<Line<T>>(&ci)) {
        const auto& m = std::get<Line<T>>(cj);
        same = residual::parallel(*l, m) <= T(tol.eps) && abs(l->c - m.c) <= tol.length();
      } else {
        const auto& c1 = std::get<Circle<T>>(ci);
        const auto& c2 = std::get<Circle<T>>(cj);
        same = dist(c1.center, c2.center) <= tol.length() && abs(c1.radius - c2.radius) <= tol.length();
      }
      if (same) throw GeometryError(ErrorKind::DegenerateInput, "repeated tangency constraint");
    }
  }

  std::array<int, 3> signed_slots{};
  int n_signed = 0;
  for (int i = 0; i < 3; ++i)
    if (!std::holds_alternative<Point<T>>(problem.constraints[i])) signed_slots[n_signed++] = i;

  const T len_tol = tol.length();
  std::vector<std::array<T, 3>> raw;

  for (int mask = 0; mask < (1 << n_signed); ++mask) {
    std::array<int, 3> sign = {1, 1, 1};
    for (int j = 0; j < n_signed; ++j) sign[signed_slots[j]] = (mask >> j) & 1 ? -1 : 1;
    std::array<TangencyEquation<T>, 3> eq;
    for (int i = 0; i < 3; ++i) eq[i] = equation_for(problem.constraints[i], sign[i]);

    int ref = -1;
    for (int i = 0; i < 3; ++i)
      if (eq[i].quad) {
        ref = i;
        break;
      }

    std::vector<std::array<T, 3>> candidates;
    if (ref < 0) {
      std::array<std::array<T, 3>, 3> m = {eq[0].lin, eq[1].lin, eq[2].lin};
      std::array<T, 3> rhs = {-eq[0].k0, -eq[1].k0, -eq[2].k0};
      std::array<T, 3> x;
      if (solve3(m, rhs, x, T(tol.eps))) candidates.push_back(x);
    } else {
      // Subtracting the reference quadric leaves two linear equations; their
      // solution set is a line x0 + t d in (h, k, r) space.
      std::array<std::array<T, 3>, 2> rows;
      std::array<T, 2> rhs;
      int n = 0;
      for (int i = 0; i < 3; ++i) {
        if (i == ref) continue;
        std::array<T, 3> row = eq[i].lin;
        T k0 = eq[i].k0;
        if (eq[i].quad) {
          for (int k = 0; k < 3; ++k) row[k] -= eq[ref].lin[k];
          k0 -= eq[ref].k0;
        }
        rows[n] = row;
        rhs[n] = -k0;
        ++n;
      }
      std::array<T, 3> d = cross3(rows[0], rows[1]);
      T dn = dot3(d, d);
      T rn = dot3(rows[0], rows[0]) * dot3(rows[1], rows[1]);
      if (!(dn > T(tol.eps) * T(tol.eps) * rn)) continue;
      // Minimum-norm particular solution: x0 = R^T (R R^T)^{-1} rhs.
      T g00 = dot3(rows[0], rows[0]);
      T g01 = dot3(rows[0], rows[1]);
      T g11 = dot3(rows[1], rows[1]);
      T det = g00 * g11 - g01 * g01;
      T y0 = (g11 * rhs[0] - g01 * rhs[1]) / det;
      T y1 = (g00 * rhs[1] - g01 * rhs[0]) / det;
      std::array<T, 3> x0;
      for (int k = 0; k < 3; ++k) x0[k] = y0 * rows[0][k] + y1 * rows[1][k];
      const auto& q = eq[ref];
      auto gdot = [](const std::array<T, 3>& u, const std::array<T, 3>& v) {
        return u[0] * v[0] + u[1] * v[1] - u[2] * v[2];
      };
      T A = gdot(d, d);
      T B = T(2) * gdot(x0, d) + dot3(q.lin, d);
      T C = gdot(x0, x0) + dot3(q.lin, x0) + q.k0;
      for (const T& t : quadratic_roots(A, B, C, tol.eps)) {
        candidates.push_back({x0[0] + t * d[0], x0[1] + t * d[1], x0[2] + t * d[2]});
      }
    }

    for (auto x : candidates) {
      // Newton polish on the full 3x3 system; skipped where the Jacobian is singular.
      for (int it = 0; it < 3; ++it) {
        std::array<std::array<T, 3>, 3> jac = {eq[0].grad(x), eq[1].grad(x), eq[2].grad(x)};
        std::array<T, 3> f = {-eq[0].eval(x), -eq[1].eval(x), -eq[2].eval(x)};
        std::array<T, 3> dx;
        if (!solve3(jac, f, dx, T(tol.eps) * tol.scale)) break;
        std::array<T, 3> next = {x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]};
        if (!is_finite(next[0]) || !is_finite(next[1]) || !is_finite(next[2])) break;
        x = next;
      }
      if (!(x[2] > len_tol)) continue;
      raw.push_back(x);
    }
  }

  std::vector<TangencySolution<T>> out;
  for (const auto& x : raw) {
    Circle<T> circ{{x[0], x[1]}, x[2]};
    // Residual contract; spurious roots from the linear reduction are dropped here.
    bool ok = true;
    for (const auto& c : problem.constraints) {
      T res;
      if (auto* p = std::get_if<Point<T>>(&c)) res = residual::on_circle(*p, circ, tol);
      else if (auto* l = std::get_if<Line<T>>(&c)) res = residual::tangent(circ, *l, tol);
      else res = residual::tangent(circ, std::get<Circle<T>>(c), tol);
      if (!(res <= T(tol.eps))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& s : out) {
      if (dist(s.circle.center, circ.center) <= len_tol && abs(s.circle.radius - circ.radius) <= len_tol) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    TangencySolution<T> sol;
    sol.circle = circ;
    for (const auto& c : problem.constraints) {
      if (auto* p = std::get_if<Point<T>>(&c)) sol.passes_through.push_back(*p);
      else if (auto* l = std::get_if<Line<T>>(&c)) sol.touch_points.push_back(touch_point(circ, *l));
      else sol.touch_points.push_back(touch_point(circ, std::get<Circle<T>>(c), tol));
    }
    out.push_back(std::move(sol));
  }

  std::sort(out.begin(), out.end(), [&](const TangencySolution<T>& u, const TangencySolution<T>& v) {
    if (abs(u.circle.radius - v.circle.radius) > len_tol) return u.circle.radius < v.circle.radius;
    if (abs(u.circle.center.x - v.circle.center.x) > len_tol) return u.circle.center.x < v.circle.center.x;
    return u.circle.center.y < v.circle.center.y;
  });
  return out;
}

/// Returns the unique solution satisfying the predicate.
template <typename T, typename Pred>
TangencySolution<T> select(const std::vector<TangencySolution<T>>& solutions, Pred&& pred) {
  const TangencySolution<T>* hit = nullptr;
  int count = 0;
  for (const auto& s : solutions) {
    if (pred(s)) {
      hit = &s;
      ++count;
    }
  }
  if (count != 1) {
    throw GeometryError(ErrorKind::AmbiguousSelection,
                        std::to_string(count) + " of " + std::to_string(solutions.size()) + " solutions match");
  }
  return *hit;
}

}  // namespace gex
