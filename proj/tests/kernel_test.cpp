#include "gex/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace gex {
namespace {

const Tolerance<Fast> kTol{1.0, 1e-10};

TEST(LineThrough, AxisCases) {
  Line<Fast> x_axis = line_through<Fast>({0, 0}, {1, 0}, kTol);
  EXPECT_DOUBLE_EQ(x_axis.a, 0.0);
  EXPECT_DOUBLE_EQ(x_axis.b, 1.0);
  EXPECT_DOUBLE_EQ(x_axis.c, 0.0);

  Line<Fast> y_axis = line_through<Fast>({0, 0}, {0, 1}, kTol);
  EXPECT_DOUBLE_EQ(std::abs(y_axis.a), 1.0);
  EXPECT_DOUBLE_EQ(y_axis.b, 0.0);
  EXPECT_DOUBLE_EQ(y_axis.c, 0.0);
}

TEST(LineThrough, DiagonalSubstitution) {
  Line<Fast> l = line_through<Fast>({0, 0}, {1, 1}, kTol);
  EXPECT_NEAR(l.a, -l.b, 1e-15);
  EXPECT_NEAR(std::abs(l.a), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(l.c, 0.0, 1e-15);
  EXPECT_NEAR(l.eval({1, 1}), 0.0, 1e-15);
  EXPECT_GT(l.a, 0.0);  // sign convention
}

TEST(LineThrough, CoincidentPointsRejected) {
  try {
    line_through<Fast>({1, 1}, {1, 1}, kTol);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
  }
}

TEST(IntersectLL, Examples) {
  auto x0 = make_line<Fast>(1, 0, 0);
  auto y0 = make_line<Fast>(0, 1, 0);
  auto p = intersect_ll(x0, y0, kTol);
  EXPECT_NEAR(p.x, 0, 1e-15);
  EXPECT_NEAR(p.y, 0, 1e-15);

  auto diag = make_line<Fast>(1, 1, -1);
  auto q = intersect_ll(y0, diag, kTol);
  EXPECT_NEAR(q.x, 1, 1e-15);
  EXPECT_NEAR(q.y, 0, 1e-15);

  auto y1 = make_line<Fast>(0, 1, -1);
  try {
    intersect_ll(y0, y1, kTol);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParallelLines);
  }
}

TEST(IntersectLC, SecantTangentMiss) {
  Circle<Fast> unit{{0, 0}, 1};
  auto two = intersect_lc(make_line<Fast>(0, 1, 0), unit, kTol);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0].x, -1, 1e-15);
  EXPECT_NEAR(two[1].x, 1, 1e-15);

  auto one = intersect_lc(make_line<Fast>(0, 1, -1), unit, kTol);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].x, 0, 1e-15);
  EXPECT_NEAR(one[0].y, 1, 1e-15);

  EXPECT_TRUE(intersect_lc(make_line<Fast>(0, 1, -2), unit, kTol).empty());
}

TEST(IntersectCC, Examples) {
  Circle<Fast> c0{{0, 0}, 1};
  auto tangent_pt = intersect_cc(c0, Circle<Fast>{{2, 0}, 1}, kTol);
  ASSERT_EQ(tangent_pt.size(), 1u);
  EXPECT_NEAR(tangent_pt[0].x, 1, 1e-15);

  // Oracle: both points must satisfy both circle equations.
  Circle<Fast> c1{{1, 0}, 1};
  auto two = intersect_cc(c0, c1, kTol);
  ASSERT_EQ(two.size(), 2u);
  for (const auto& p : two) {
    EXPECT_NEAR(p.x * p.x + p.y * p.y, 1.0, 1e-15);
    EXPECT_NEAR((p.x - 1) * (p.x - 1) + p.y * p.y, 1.0, 1e-15);
  }
  EXPECT_NEAR(two[0].x, 0.5, 1e-15);
  EXPECT_NEAR(two[0].y, -std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(two[1].y, std::sqrt(3.0) / 2, 1e-15);

  EXPECT_TRUE(intersect_cc(c0, Circle<Fast>{{3, 0}, 1}, kTol).empty());

  try {
    intersect_cc(c0, c0, kTol);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoincidentCircles);
  }
}

TEST(Constructions, FootMidpointReflect) {
  auto x_axis = make_line<Fast>(0, 1, 0);
  auto f = foot<Fast>({1, 1}, x_axis);
  EXPECT_NEAR(f.x, 1, 1e-15);
  EXPECT_NEAR(f.y, 0, 1e-15);
  auto m = midpoint<Fast>({0, 0}, {2, 4});
  EXPECT_EQ(m.x, 1);
  EXPECT_EQ(m.y, 2);
  auto r = reflect<Fast>({0, 1}, x_axis);
  EXPECT_NEAR(r.x, 0, 1e-15);
  EXPECT_NEAR(r.y, -1, 1e-15);

  auto par = parallel_through<Fast>({3, 2}, x_axis);
  EXPECT_TRUE(is_parallel(par, x_axis, kTol));
  EXPECT_TRUE(on<Fast>({3, 2}, par, kTol));
  auto perp = perpendicular_through<Fast>({3, 2}, x_axis);
  EXPECT_TRUE(is_perpendicular(perp, x_axis, kTol));
  EXPECT_TRUE(on<Fast>({3, 2}, perp, kTol));
}

TEST(Measure, Examples) {
  EXPECT_DOUBLE_EQ(signed_area<Fast>({0, 0}, {1, 0}, {0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(signed_area<Fast>({0, 0}, {0, 1}, {1, 0}), -0.5);
  EXPECT_NEAR(angle<Fast>({1, 0}, {0, 0}, {0, 1}, kTol), pi<double>() / 2, 1e-15);
  EXPECT_DOUBLE_EQ(dist<Fast>({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(dist<Fast>({3, 4}, {0, 0}), 5.0);
}

TEST(Predicates, Examples) {
  EXPECT_TRUE(collinear<Fast>({0, 0}, {1, 1}, {2, 2}, kTol));
  EXPECT_FALSE(collinear<Fast>({0, 0}, {1, 1}, {2, 2.001}, kTol));
  EXPECT_TRUE(tangent(Circle<Fast>{{0, 0}, 1}, make_line<Fast>(0, 1, -1), kTol));
  EXPECT_TRUE(is_perpendicular(make_line<Fast>(0, 1, 0), make_line<Fast>(1, 0, 0), kTol));
  EXPECT_TRUE(concurrent(make_line<Fast>(1, 0, 0), make_line<Fast>(0, 1, 0), make_line<Fast>(1, 1, 0), kTol));
  EXPECT_TRUE(on<Fast>({0, 1}, Circle<Fast>{{0, 0}, 1}, kTol));
}

TEST(Predicates, DualCheckOnExactInputs) {
  TolerancePolicy policy;
  auto collinear_res = [](const auto& tol, const auto& p, const auto& q, const auto& r) {
    return residual::collinear(p, q, r, tol);
  };
  EXPECT_TRUE(dual_check(policy, 1.0, collinear_res, Point<Fast>{0, 0}, Point<Fast>{1, 1}, Point<Fast>{2, 2}));
  // Passes the fast screen but not confirmation.
  EXPECT_FALSE(dual_check(policy, 1.0, collinear_res, Point<Fast>{0, 0}, Point<Fast>{1, 1},
                          Point<Fast>{2, 2 + 1e-13}));
}

TEST(Invariants, NormalizationAndDeterminism) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    Point<Fast> p{u(rng), u(rng)}, q{u(rng), u(rng)};
    Line<Fast> l = line_through(p, q, Tolerance<Fast>{10.0, 1e-10});
    EXPECT_LE(std::abs(l.a * l.a + l.b * l.b - 1), 1e-10);
    EXPECT_LE(std::abs(l.eval(p)) / 10.0, 1e-10);
    EXPECT_LE(std::abs(l.eval(q)) / 10.0, 1e-10);
    Line<Fast> again = line_through(p, q, Tolerance<Fast>{10.0, 1e-10});
    EXPECT_EQ(l.a, again.a);
    EXPECT_EQ(l.b, again.b);
    EXPECT_EQ(l.c, again.c);
  }
}

TEST(Invariants, ResidualContractAtConfirmPrecision) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  Tolerance<Confirm> tol{Confirm(6), 1e-24};
  for (int i = 0; i < 100; ++i) {
    Point<Confirm> p{u(rng), u(rng)}, q{u(rng), u(rng)}, r{u(rng), u(rng)};
    Line<Confirm> l = line_through(p, q, tol);
    EXPECT_LE(residual::on_line(p, l, tol), Confirm(1e-24));
    EXPECT_LE(residual::on_line(q, l, tol), Confirm(1e-24));
    Point<Confirm> f = foot(r, l);
    EXPECT_LE(residual::on_line(f, l, tol), Confirm(1e-24));
    Circle<Confirm> c = circle_through(p, q, r, tol);
    EXPECT_LE(residual::on_circle(p, c, tol), Confirm(1e-24));
    EXPECT_LE(residual::on_circle(r, c, tol), Confirm(1e-24));
  }
}

}  // namespace
}  // namespace gex
