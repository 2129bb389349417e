#include "gex/apollonius.hpp"
#include "gex/triangle.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace gex {
namespace {

template <typename T>
T max_residual(const TangencyProblem<T>& p, const TangencySolution<T>& s, const Tolerance<T>& tol) {
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

TEST(Apollonius, PPPRightTriangle) {
  Tolerance<Fast> tol{1.0, 1e-10};
  TangencyProblem<Fast> p{{Point<Fast>{0, 0}, Point<Fast>{1, 0}, Point<Fast>{0, 1}}};
  EXPECT_EQ(family(p), "PPP");
  auto sols = solve(p, tol);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_NEAR(sols[0].circle.center.x, 0.5, 1e-15);
  EXPECT_NEAR(sols[0].circle.center.y, 0.5, 1e-15);
  EXPECT_NEAR(sols[0].circle.radius, std::sqrt(2.0) / 2, 1e-15);
  EXPECT_EQ(sols[0].passes_through.size(), 3u);
}

TEST(Apollonius, LLL345IncircleAndExcircles) {
  auto t = Triangle<Fast>::from_sides(3, 4, 5);
  auto tol = t.tolerance();
  TangencyProblem<Fast> p{{line_through(t.B(), t.C(), tol), line_through(t.C(), t.A(), tol),
                           line_through(t.A(), t.B(), tol)}};
  auto sols = solve(p, tol);
  ASSERT_EQ(sols.size(), 4u);
  // r = K/s = 1 and r_v = K/(s - side) = 6/3, 6/2, 6/1.
  const double expected[] = {1, 2, 3, 6};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(sols[i].circle.radius, expected[i], 1e-13);
  for (const auto& s : sols) EXPECT_EQ(s.touch_points.size(), 3u);
}

TEST(Apollonius, LLPCenterPerpendicularToBC) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    Point<Fast> A{u(rng), u(rng)}, B{u(rng), u(rng)}, C{u(rng), u(rng)};
    if (std::abs(signed_area(A, B, C)) < 0.1) continue;
    Triangle<Fast> t(A, B, C);
    auto tol = t.tolerance();
    Point<Fast> D = center(CenterKind::Gergonne, t);
    TangencyProblem<Fast> p{{line_through(A, B, tol), line_through(A, C, tol), D}};
    EXPECT_EQ(family(p), "LLP");
    auto sols = solve(p, tol);
    ASSERT_EQ(sols.size(), 2u);
    Line<Fast> bc = line_through(B, C, tol);
    // Only the smaller circle (nearer A) has DE perpendicular to BC.
    EXPECT_TRUE(is_perpendicular(line_through(D, sols[0].circle.center, tol), bc, tol));
    EXPECT_FALSE(is_perpendicular(line_through(D, sols[1].circle.center, tol), bc, tol));
  }
}

TEST(Apollonius, SelectPredicates) {
  auto t = Triangle<Fast>::from_sides(3, 4, 5);
  auto tol = t.tolerance();
  TangencyProblem<Fast> p{{line_through(t.B(), t.C(), tol), line_through(t.C(), t.A(), tol),
                           line_through(t.A(), t.B(), tol)}};
  auto sols = solve(p, tol);
  auto inside = [&](const TangencySolution<Fast>& s) {
    const auto& o = s.circle.center;
    double s1 = signed_area(t.A(), t.B(), o), s2 = signed_area(t.B(), t.C(), o), s3 = signed_area(t.C(), t.A(), o);
    return (s1 > 0 && s2 > 0 && s3 > 0) || (s1 < 0 && s2 < 0 && s3 < 0);
  };
  EXPECT_NEAR(select(sols, inside).circle.radius, 1.0, 1e-13);

  std::vector<TangencySolution<Fast>> none;
  try {
    select(none, inside);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbiguousSelection);
  }
  EXPECT_THROW(select(sols, [](const auto&) { return true; }), GeometryError);
}

TEST(Apollonius, RepeatedConstraintRejected) {
  Tolerance<Fast> tol{1.0, 1e-10};
  TangencyProblem<Fast> p{{Point<Fast>{0, 0}, Point<Fast>{0, 0}, Point<Fast>{0, 1}}};
  EXPECT_THROW(solve(p, tol), GeometryError);
}

TEST(Apollonius, PPPCollinearHasNoSolution) {
  Tolerance<Fast> tol{2.0, 1e-10};
  TangencyProblem<Fast> p{{Point<Fast>{0, 0}, Point<Fast>{1, 0}, Point<Fast>{2, 0}}};
  EXPECT_TRUE(solve(p, tol).empty());
}

TEST(Apollonius, SolutionsStableUnderTinyPerturbation) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_real_distribution<double> jitter(-1e-13, 1e-13);
  for (int i = 0; i < 50; ++i) {
    Point<Fast> A{u(rng), u(rng)}, B{u(rng), u(rng)}, C{u(rng), u(rng)};
    if (std::abs(signed_area(A, B, C)) < 0.2) continue;
    Tolerance<Fast> tol{4.0, 1e-10};
    auto base = solve(TangencyProblem<Fast>{{line_through(A, B, tol), line_through(B, C, tol), line_through(C, A, tol)}}, tol);
    Point<Fast> A2{A.x + jitter(rng), A.y + jitter(rng)};
    auto moved = solve(TangencyProblem<Fast>{{line_through(A2, B, tol), line_through(B, C, tol), line_through(C, A2, tol)}}, tol);
    ASSERT_EQ(base.size(), 4u);
    ASSERT_EQ(moved.size(), base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
      EXPECT_LE(dist(base[k].circle.center, moved[k].circle.center), 1e-10);
    }
  }
}

TEST(Apollonius, ReflectionSymmetry) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-2, 2);
  Line<Fast> mirror = make_line<Fast>(0.3, -0.8, 0.25);
  for (int i = 0; i < 40; ++i) {
    Point<Fast> P{u(rng), u(rng)}, Q{u(rng), u(rng)}, R{u(rng), u(rng)}, S{u(rng), u(rng)};
    Tolerance<Fast> tol{4.0, 1e-10};
    Circle<Fast> c{{u(rng), u(rng)}, 0.5 + std::abs(u(rng)) / 4};
    TangencyProblem<Fast> p{{P, line_through(Q, R, tol), c}};
    TangencyProblem<Fast> m{{reflect(P, mirror), line_through(reflect(Q, mirror), reflect(R, mirror), tol),
                             Circle<Fast>{reflect(c.center, mirror), c.radius}}};
    std::vector<TangencySolution<Fast>> a, b;
    try {
      a = solve(p, tol);
      b = solve(m, tol);
    } catch (const GeometryError&) {
      continue;
    }
    ASSERT_EQ(a.size(), b.size());
    for (const auto& s : a) {
      Point<Fast> img = reflect(s.circle.center, mirror);
      bool found = false;
      for (const auto& t : b)
        if (dist(img, t.circle.center) < 1e-9 && std::abs(t.circle.radius - s.circle.radius) < 1e-9) found = true;
      EXPECT_TRUE(found);
    }
  }
}

TEST(Apollonius, LLCMixtilinearSelection) {
  auto t = Triangle<Fast>::from_sides(5, 6, 7);
  auto mix = mixtilinear_incircle(t, Vertex::A);
  auto tol = t.tolerance();
  EXPECT_TRUE(tangent(mix.circle, circumcircle(t), tol));
  EXPECT_TRUE(tangent(mix.circle, line_through(t.A(), t.B(), tol), tol));
  EXPECT_TRUE(tangent(mix.circle, line_through(t.A(), t.C(), tol), tol));
}

}  // namespace
TEST(Apollonius, RandomInstancesSpellTheirFamily) {
  std::mt19937_64 rng(3);
  for (const auto& f : testing::apollonius_families()) EXPECT_EQ(family(testing::random_problem<Fast>(f, rng)), f);
}

TEST(Apollonius, EveryFamilyMeetsConfirmResidual) {
  // 20 instances per family here; the acceptance run uses 200.
  for (const auto& f : testing::apollonius_families()) {
    auto r = testing::family_residuals<Confirm>(f, 20, 11, 1e-24);
    EXPECT_EQ(r.instances, 20) << f;
    EXPECT_GE(r.circles, 20u) << f;
    EXPECT_LE(r.worst, 1e-24) << f;
  }
}

}  // namespace gex
