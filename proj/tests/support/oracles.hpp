#pragma once

#include "gex/apollonius.hpp"
#include "gex/formulas.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

namespace gex::testing {

using namespace gex::formulas;

template <typename T>
SideTriple<T> random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng);
    double m = std::min({b + c - a, c + a - b, a + b - c});
    if (m < 0.02 * (a + b + c)) continue;
    return SideTriple<T>(T(a), T(b), T(c));
  }
}

/// Everything measured directly on the coordinate realization.
template <typename T>
struct Measured {
  Triangle<T> t;
  Tolerance<T> tol;
  Point<T> D;

  explicit Measured(const SideTriple<T>& s) : t(realize(s)), tol(t.tolerance()) {
    // Gergonne point as the intersection of two cevians to the incircle contact points.
    Circle<T> in = incircle(t);
    Point<T> e_bc = foot(in.center, line(t.B(), t.C()));
    Point<T> e_ca = foot(in.center, line(t.C(), t.A()));
    D = intersect_ll(line(t.A(), e_bc), line(t.B(), e_ca), tol);
  }

  Line<T> line(const Point<T>& p, const Point<T>& q) const { return line_through(p, q, tol); }

  const Point<T>& V(Vertex v) const { return t.vertex(v); }

  /// Endpoints of side s, in the side's naming order (BC -> B, C).
  std::pair<Point<T>, Point<T>> ends(Side s) const {
    switch (s) {
      case Side::BC: return {t.B(), t.C()};
      case Side::CA: return {t.C(), t.A()};
      case Side::AB: return {t.A(), t.B()};
    }
    return {};
  }

  Point<T> para_end(Side parallel_side, Side meet_side) const {
    auto [p, q] = ends(parallel_side);
    auto [r, s] = ends(meet_side);
    return intersect_ll(parallel_through(D, line(p, q)), line(r, s), tol);
  }
};

constexpr Side kSides[] = {Side::BC, Side::CA, Side::AB};
constexpr Vertex kVertices[] = {Vertex::A, Vertex::B, Vertex::C};

/// Worst relative residual per closed form against the coordinate measurement.
struct FormulaResiduals {
  std::map<std::string, double> worst;

  template <typename T>
  void check(const std::string& name, const T& formula, const T& measured) {
    using std::abs;
    double r = to_double(abs(formula - measured) / abs(measured));
    if (!(r == r)) r = std::numeric_limits<double>::infinity();
    auto [it, fresh] = worst.emplace(name, r);
    if (!fresh) it->second = std::max(it->second, r);
  }

  double max() const {
    double m = 0;
    for (const auto& [n, r] : worst) m = std::max(m, r);
    return m;
  }
};

template <typename T>
void check_all_formulas(const SideTriple<T>& s, FormulaResiduals& out) {
  Measured<T> m(s);
  for (Vertex v : kVertices) {
    out.check("spoke_distance", spoke_distance(s, v), dist(m.V(v), m.D));
    Side opp = opposite(v);
    auto [p, q] = m.ends(opp);
    Point<T> trace = intersect_ll(m.line(m.V(v), m.D), m.line(p, q), m.tol);
    auto [l1, l2] = trace_lengths(s, v);
    out.check("trace_lengths.first", l1, dist(p, trace));
    out.check("trace_lengths.second", l2, dist(q, trace));
    out.check("cevian_division", cevian_division(s, v), dist(m.V(v), m.D) / dist(m.D, trace));
    out.check("cevian_length", cevian_length(s, v), dist(m.V(v), trace));
    out.check("gergonne_subarea", gergonne_subarea(s, v), abs(signed_area(m.D, p, q)));
    for (Vertex w : kVertices) {
      out.check("tripolar_ratio", tripolar_ratio(s, v, w), dist(m.D, m.V(v)) / dist(m.D, m.V(w)));
    }
  }
  out.check("barycentric_area_ratio", barycentric_area_ratio(s), abs(signed_area(m.t.B(), m.D, m.t.C()) / signed_area(m.t.C(), m.D, m.t.A())));
  for (Side ps : kSides) {
    Vertex apex = opposite(ps);
    out.check("apothem", apothem(s, ps), abs(m.line(m.ends(ps).first, m.ends(ps).second).eval(m.D)));
    for (Side other : kSides) {
      if (other == ps) continue;
      T d1 = abs(m.line(m.ends(ps).first, m.ends(ps).second).eval(m.D));
      T d2 = abs(m.line(m.ends(other).first, m.ends(other).second).eval(m.D));
      out.check("trilinear_ratio", trilinear_ratio(s, ps, other), d1 / d2);

      Point<T> e = m.para_end(ps, other);
      out.check("pararadius", pararadius(s, ps, other), dist(m.D, e));
      out.check("parallel_ratio", parallel_ratio(s, ps, other), dist(m.V(apex), e) / dist(m.D, e));
      auto [ae, ce] = pararadius_split(s, ps, other);
      Vertex far = static_cast<Vertex>(3 - static_cast<int>(apex) - static_cast<int>(opposite(other)));
      out.check("pararadius_split.first", ae, dist(m.V(apex), e));
      out.check("pararadius_split.second", ce, dist(m.V(far), e));
    }
    std::array<Side, 2> rest{};
    int k = 0;
    for (Side o : kSides)
      if (o != ps) rest[k++] = o;
    out.check("parachord", parachord(s, ps), dist(m.para_end(ps, rest[0]), m.para_end(ps, rest[1])));
  }
}

/// Every family code that family() produces.
inline const std::vector<std::string>& apollonius_families() {
  static const std::vector<std::string> f = {"PPP", "PPL", "LLP", "LLL", "PPC", "CLP", "LLC", "PCC", "LCC", "CCC"};
  return f;
}

/// Random instance of a family with inputs in [-2, 2]^2 and radii in [0.2, 1].
template <typename T>
TangencyProblem<T> random_problem(const std::string& fam, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2), r(0.2, 1.0);
  auto pt = [&] { return Point<T>{T(u(rng)), T(u(rng))}; };
  TangencyProblem<T> p;
  for (std::size_t i = 0; i < 3; ++i) {
    switch (fam[i]) {
      case 'P': p.constraints[i] = pt(); break;
      case 'L': {
        Point<T> a = pt(), b = pt();
        p.constraints[i] = line_through(a, b, Tolerance<T>{T(1), 1e-30});
        break;
      }
      default: p.constraints[i] = Circle<T>{pt(), T(r(rng))}; break;
    }
  }
  return p;
}

/// Largest incidence or tangency residual of a solution over its constraints.
template <typename T>
T tangency_residual(const TangencyProblem<T>& p, const TangencySolution<T>& s, const Tolerance<T>& tol) {
  T worst(0);
  for (const auto& c : p.constraints) {
    T r;
    if (auto* pt = std::get_if<Point<T>>(&c)) r = residual::on_circle(*pt, s.circle, tol);
    else if (auto* l = std::get_if<Line<T>>(&c)) r = residual::tangent(s.circle, *l, tol);
    else r = residual::tangent(s.circle, std::get<Circle<T>>(c), tol);
    if (r > worst) worst = r;
  }
  return worst;
}

struct FamilyResult {
  int instances = 0;
  int rejected = 0;
  std::size_t circles = 0;
  double worst = 0;
};

/// Solves `n` random instances of a family that have at least one solution.
template <typename T>
FamilyResult family_residuals(const std::string& fam, int n, std::uint64_t seed, double eps) {
  std::mt19937_64 rng(seed);
  FamilyResult out;
  Tolerance<T> tol{T(4), eps};
  while (out.instances < n) {
    auto p = random_problem<T>(fam, rng);
    std::vector<TangencySolution<T>> sols;
    try {
      sols = solve(p, tol);
    } catch (const GeometryError&) {
      ++out.rejected;
      continue;
    }
    if (sols.empty()) {
      ++out.rejected;
      continue;
    }
    ++out.instances;
    out.circles += sols.size();
    for (const auto& s : sols) out.worst = std::max(out.worst, to_double(tangency_residual(p, s, tol)));
  }
  return out;
}

}  // namespace gex::testing
