#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "loops/domain.hpp"
#include "loops/event.hpp"
#include "loops/io.hpp"
#include "loops/loop.hpp"
#include "test_util.hpp"

using namespace loops;
using loops::test::unit_square;

namespace {

Loop twice(const Loop& l) {
  Points v(2, 2 * l.size());
  v << l.vertices(), l.vertices();
  return Loop(std::move(v));
}

Loop figure_eight() {
  // CCW unit square, then a CW unit square touching it at (1,1)
  Points v(2, 8);
  v << 1, 0, 0, 1, 1, 1, 2, 2,  //
      1, 1, 0, 0, 1, 2, 2, 1;
  return Loop(std::move(v));
}

}  // namespace

TEST(Winding, ConvexInterior) { EXPECT_EQ(winding_number(unit_square(), Point(0.5, 0.5)), 1); }

TEST(Winding, Exterior) { EXPECT_EQ(winding_number(unit_square(), Point(5, 5)), 0); }

TEST(Winding, TraversedTwice) { EXPECT_EQ(winding_number(twice(unit_square()), Point(0.5, 0.5)), 2); }

TEST(Winding, PointOnCurveThrows) {
  try {
    winding_number(unit_square(), Point(0.5, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PointOnCurve);
  }
}

TEST(Winding, RotationAndReversalProperty) {
  auto eng = make_engine(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Loop l = test::random_star(eng, 12);
    const Point z(2 * uniform01(eng) - 1, 2 * uniform01(eng) - 1);
    const int w = winding_number(l, z);
    Points rot(2, l.size());
    const Eigen::Index k = trial % l.size();
    for (Eigen::Index i = 0; i < l.size(); ++i) rot.col(i) = l.vertices().col((i + k) % l.size());
    EXPECT_EQ(winding_number(Loop(rot), z), w);
    EXPECT_EQ(winding_number(reversed(l), z), -w);
  }
}

TEST(SignedArea, Orientation) {
  EXPECT_DOUBLE_EQ(signed_area(unit_square()), 1.0);
  EXPECT_DOUBLE_EQ(signed_area(reversed(unit_square())), -1.0);
}

TEST(SignedArea, FigureEightCancels) {
  const Loop f = figure_eight();
  EXPECT_DOUBLE_EQ(signed_area(f), 0.0);
  EXPECT_EQ(winding_number(f, Point(0.5, 0.5)), 1);
  EXPECT_EQ(winding_number(f, Point(1.5, 1.5)), -1);
}

TEST(SignedArea, EqualsWindingIntegral) {
  auto eng = make_engine(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Loop l = test::random_star(eng, 9);
    const int m = 400;
    const double h = 4.0 / m;
    double acc = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) acc += winding_number(l, Point(-2 + (i + 0.5) * h, -2 + (j + 0.5) * h));
    acc *= h * h;
    EXPECT_NEAR(acc, signed_area(l), 0.01 * std::abs(signed_area(l)));
  }
}

TEST(Diameter, Examples) {
  EXPECT_DOUBLE_EQ(diameter(unit_square()), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(diameter(rectangle_loop(0, 0, 1, 2)), std::sqrt(5.0));
  EXPECT_NEAR(max_radius(circle_loop(Point::Zero(), 1, 1000)), 1.0, 1e-15);
}

TEST(Simple, Detection) {
  EXPECT_TRUE(is_simple(unit_square()));
  EXPECT_FALSE(is_simple(figure_eight()));
  Points bow(2, 4);
  bow << 0, 1, 1, 0, 0, 1, 0, 1;
  EXPECT_FALSE(is_simple(Loop(bow)));
  EXPECT_THROW(SimpleLoop::checked(Loop(bow)), Error);
  EXPECT_TRUE(is_simple(circle_loop(Point::Zero(), 1, 5000)));
}

TEST(PolyLoop, Invariants) {
  Points two(2, 2);
  two << 0, 1, 0, 0;
  EXPECT_THROW(Loop{two}, Error);
  Points rep(2, 3);
  rep << 0, 0, 1, 0, 0, 1;
  EXPECT_THROW(Loop{rep}, Error);
}

TEST(Events, AnnulusHole) {
  const AnnulusSpec a(Point::Zero(), 1, 2);
  const LoopEvent e = SurroundsAnnulusHole{a};
  EXPECT_TRUE(evaluate_event(e, circle_loop(Point::Zero(), 1.5, 200)));
  EXPECT_FALSE(evaluate_event(e, rectangle_loop(1.4, -0.1, 1.6, 0.1)));
  EXPECT_FALSE(evaluate_event(e, circle_loop(Point::Zero(), 3, 200)));
}

TEST(Events, AnnulusRigidMotionProperty) {
  auto eng = make_engine(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Loop l = test::random_star(eng, 20);
    const AnnulusSpec a(Point(0.1 * uniform01(eng), 0.1 * uniform01(eng)), 0.2 + 0.3 * uniform01(eng), 1.6);
    const double th = 2 * std::numbers::pi * uniform01(eng);
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(th).toRotationMatrix();
    const Point t(5 * uniform01(eng), -3 * uniform01(eng));
    const Points moved = (rot * l.vertices()).colwise() + t;
    const AnnulusSpec ma(rot * a.center + t, a.r_inner, a.r_outer);
    EXPECT_EQ(evaluate_event(SurroundsAnnulusHole{a}, l), evaluate_event(SurroundsAnnulusHole{ma}, Loop(moved)));
  }
}

TEST(Events, CombinatorsAndSupport) {
  const Loop c = circle_loop(Point::Zero(), 1.5, 100);
  const LoopEvent in_disc = ContainedIn{PlanarDomain::disc(Point::Zero(), 2)};
  EXPECT_TRUE(evaluate_event(in_disc && Surrounds{Point::Zero()}, c));
  EXPECT_FALSE(evaluate_event(in_disc && Surrounds{Point(1.8, 0)}, c));
  EXPECT_FALSE(evaluate_event(Never{}, c));
  EXPECT_TRUE(evaluate_event(Exits{PlanarDomain::disc(Point::Zero(), 1)}, c));
  EXPECT_TRUE(evaluate_event(MaxRadiusIn{1.4, 1.6}, c));
  EXPECT_TRUE(support_box(Never{}).empty());
  EXPECT_FALSE(support_box(Surrounds{Point::Zero()}).bounded());
  const Box b = support_box(in_disc && MaxRadiusIn{0, 1});
  EXPECT_DOUBLE_EQ(b.hi.x(), 1.0);
}

TEST(Domain, SlitContainment) {
  auto d = PlanarDomain::disc(Point::Zero(), 1);
  d.add_slit(Point(0.5, 0), Point(1, 0));
  EXPECT_TRUE(d.contains(Point(0.2, 0)));
  EXPECT_FALSE(d.contains(Point(0.7, 0)));
  EXPECT_NEAR(d.distance(Point(0.7, 0.1)), 0.1, 1e-15);
  EXPECT_NEAR(d.distance(Point(0, 0)), 0.5, 1e-15);
  // crosses the slit between vertices
  EXPECT_FALSE(d.contains_loop(rectangle_loop(0.6, -0.1, 0.8, 0.1).vertices()));
  EXPECT_TRUE(d.contains_loop(rectangle_loop(-0.4, -0.1, 0.4, 0.1).vertices()));
}

TEST(Domain, PolygonAndHoles) {
  auto d = PlanarDomain::polygon(rectangle_loop(-1, -1, 1, 1));
  d.add_hole_disc(Point::Zero(), 0.2);
  EXPECT_FALSE(d.contains(Point(0.1, 0)));
  EXPECT_TRUE(d.contains(Point(0.5, 0.5)));
  EXPECT_NEAR(d.distance(Point(0.5, 0)), 0.3, 1e-15);
  EXPECT_FALSE(d.contains_loop(circle_loop(Point::Zero(), 1.2, 50).vertices()));
}

TEST(Shape, RootScalingCircle) {
  const SimpleLoop c = SimpleLoop::checked(circle_loop(Point::Zero(), 5, 360));
  const Shape s = normalize_shape(c, NormalizeMode::RootScaling);
  EXPECT_NEAR(max_radius(s.loop), 1.0, 1e-12);
  EXPECT_NEAR(s.loop.vertices().col(0).x(), 1.0, 1e-12);
}

TEST(Shape, Idempotent) {
  auto eng = make_engine(3);
  for (auto mode : {NormalizeMode::RootScaling, NormalizeMode::TranslateAndScale}) {
    const SimpleLoop l = SimpleLoop::checked(test::random_star(eng, 15, Point(2, 1)));
    const Shape a = normalize_shape(l, mode);
    const Shape b = normalize_shape(a, mode);
    EXPECT_LT((a.loop.vertices() - b.loop.vertices()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Shape, TranslateAndScaleSquare) {
  const SimpleLoop sq = SimpleLoop::checked(rectangle_loop(2, 2, 4, 4));
  const Shape s = normalize_shape(sq, NormalizeMode::TranslateAndScale);
  EXPECT_LT(area_centroid(s.loop).norm(), 1e-12);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(s.loop.vertices().col(i).norm(), 1.0, 1e-12);
}

TEST(Shape, Degenerate) {
  const SimpleLoop tiny = SimpleLoop::by_construction(rectangle_loop(0, 0, 1e-14, 1e-14));
  EXPECT_THROW(normalize_shape(tiny, NormalizeMode::RootScaling), Error);
}

TEST(Shape, Functionals) {
  auto f = shape_functionals(normalize_shape(SimpleLoop::checked(circle_loop(Point(1, 2), 3, 4000)),
                                             NormalizeMode::TranslateAndScale));
  EXPECT_NEAR(f.area_over_diam2, std::numbers::pi / 4, 1e-5);
  EXPECT_NEAR(f.anisotropy, 1.0, 1e-9);
  f = shape_functionals(normalize_shape(SimpleLoop::checked(unit_square()), NormalizeMode::TranslateAndScale));
  EXPECT_NEAR(f.area_over_diam2, 0.5, 1e-12);
  f = shape_functionals(normalize_shape(SimpleLoop::checked(rectangle_loop(0, 0, 1, 2)), NormalizeMode::RootScaling));
  EXPECT_NEAR(f.area_over_diam2, 0.4, 1e-12);
  EXPECT_NEAR(f.anisotropy, 2.0, 1e-12);
}

TEST(Shape, FunctionalsInvariantProperty) {
  auto eng = make_engine(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Loop l = test::random_star(eng, 16);
    const double s = 0.1 + 10 * uniform01(eng);
    const Point t(uniform01(eng) * 7, -uniform01(eng));
    const auto a = shape_functionals(normalize_shape(SimpleLoop::checked(l), NormalizeMode::TranslateAndScale));
    const auto b = shape_functionals(
        normalize_shape(SimpleLoop::checked(translated(scaled(l, s), t)), NormalizeMode::TranslateAndScale));
    EXPECT_NEAR(a.area_over_diam2, b.area_over_diam2, 1e-10);
    EXPECT_NEAR(a.anisotropy, b.anisotropy, 1e-9);
    const Shape n = normalize_shape(SimpleLoop::checked(l), NormalizeMode::TranslateAndScale);
    EXPECT_NEAR(max_radius(n.loop), 1.0, 1e-9);
  }
}

TEST(LoopIo, RoundTripAndOddCount) {
  const Loop c = circle_loop(Point(0.1, 0.2), 0.7, 17);
  std::stringstream ss;
  write_loop(ss, c);
  write_loop(ss, unit_square());
  const auto back = read_loops(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].vertices(), c.vertices());
  try {
    parse_loop("0 0 1 0 1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidFormat);
  }
}
